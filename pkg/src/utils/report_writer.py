#!/usr/bin/env python3
"""
Report writer: ordered sections of key = value records, rendered as text or TSV
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, List, Mapping, Optional, Tuple

import pandas as pd
from jinja2 import Environment, FileSystemLoader

from utils.suite_report import SuiteReport


logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    """Stable text form of a report value."""
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if value is None:
        return 'n/a'
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (list, tuple)) and not isinstance(value, str):
        return ', '.join(format_value(v) for v in value)
    if hasattr(value, 'item') and callable(value.item):
        return format_value(value.item())
    return str(value)


@dataclass
class Section:
    name: str
    records: List[Tuple[str, str]] = field(default_factory=list)


class Report:
    def __init__(self):
        self.sections: List[Section] = []
        self.template_dir = Path(__file__).parent.parent / 'templates'

        # Plain text output, nothing to escape
        self.jinja_env = Environment(
            loader=FileSystemLoader(str(self.template_dir)),
            autoescape=False
        )

    def section(self, name: str) -> Section:
        for section in self.sections:
            if section.name == name:
                return section
        section = Section(name)
        self.sections.append(section)
        return section

    def add(self, section: str, key: str, value: Any):
        self.section(section).records.append((key, format_value(value)))

    def extend(self, section: str, values: Mapping[str, Any]):
        for key, value in values.items():
            self.add(section, key, value)

    def add_suite(self, suite: SuiteReport, section: Optional[str] = None):
        """Status, verdict, metadata, per-item verdicts and gate trace of a suite report."""
        name = section or suite.suite
        self.add(name, f"{suite.suite}.status", suite.status)
        if suite.verdict:
            self.add(name, f"{suite.suite}.verdict", suite.verdict)
        for key, value in suite.metadata.items():
            if key != 'loop':
                self.add(name, key, value)
        for item in suite.items:
            text = f"{item.status} ({item.checked} checked, {item.mode}"
            text += f", {item.failures} failures)" if item.failures else ')'
            self.add(name, f"{suite.suite}.{item.name}", text)
            if item.note:
                self.add(name, f"{suite.suite}.{item.name}.note", item.note)
            for i, witness in enumerate(item.witnesses):
                self.add(name, f"{suite.suite}.{item.name}.witness[{i}]", witness)
        for i, message in enumerate(suite.gate_trace):
            self.add(name, f"{suite.suite}.gate[{i}]", message)

    def get(self, key: str) -> Optional[str]:
        for section in self.sections:
            for k, value in section.records:
                if k == key:
                    return value
        return None

    def keys(self) -> List[str]:
        return [k for section in self.sections for k, _ in section.records]

    def to_frame(self) -> pd.DataFrame:
        rows = [{'section': s.name, 'key': k, 'value': v} for s in self.sections for k, v in s.records]
        return pd.DataFrame(rows, columns=['section', 'key', 'value'])

    def render_text(self) -> str:
        template = self.jinja_env.get_template('report_template.txt')
        return template.render(sections=self.sections) + '\n'

    def render_tsv(self) -> str:
        return self.to_frame().to_csv(sep='\t', index=False)

    def render(self, tsv: bool = False) -> str:
        return self.render_tsv() if tsv else self.render_text()
