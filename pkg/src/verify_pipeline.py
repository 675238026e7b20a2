#!/usr/bin/env python3
"""
One-shot reproduction of the order-2^14 Moufang loop with abelian inner mapping
group and nilpotency class 3, stage by stage, with a fixed report key set.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from algebra.ring import RingSpec, check_ring_axioms, graded_parts, resolve_ring
from analysis.brackets import certify_bracket_forms, commutator
from analysis.center import center, nucleus
from analysis.series import upper_central_series
from config import Config
from loops.latin import verify_latin
from loops.triple import TripleLoop
from mappings.inner_group import certify_inner_form, inner_group_closure
from suites.batteries import run_suite
from suites.moufang import check_moufang
from suites.plan import SamplingPlan
from suites.theorems import VIOLATION, theorem_harness
from utils.report_writer import Report
from utils.suite_report import SuiteReport

logger = logging.getLogger(__name__)

DEFAULT_RING = 'paper-z4'

# section, key
FIXED_KEYS: Tuple[Tuple[str, str], ...] = (
    ('ring', 'ring.ok'),
    ('ring', 'x1.size'),
    ('ring', 'x2.size'),
    ('ring', 'x3.size'),
    ('ring', 'x1_x2.overlap'),
    ('ring', 'x2_x3.overlap'),
    ('loop', 'loop.order'),
    ('loop', 'moufang.ok'),
    ('certification', 'forms.certified'),
    ('certification', 'inn.certified'),
    ('inn', 'inn.order'),
    ('inn', 'inn.abelian'),
    ('inn', 'inn.exponent'),
    ('structure', 'center.contains_x3'),
    ('structure', 'center.order'),
    ('structure', 'nucleus.contains_bc'),
    ('structure', 'triple_comm.e123'),
    ('structure', 'class'),
    ('suites', 'suites.bruck_battery'),
    ('suites', 'suites.t_compose'),
    ('theorem', 'theorem.odd_order')
)


class StageFailure(Exception):
    def __init__(self, stage: str, witness: str):
        super().__init__(f"stage {stage} failed: {witness}")
        self.stage = stage
        self.witness = witness


@dataclass
class PipelineResult:
    report: Report
    passed: bool
    failed_stage: Optional[str] = None
    witness: Optional[str] = None


class PaperVerifier:
    def __init__(self, config: Optional[Config] = None, plan: Optional[SamplingPlan] = None):
        self.config = config or Config()
        self.plan = plan or SamplingPlan.from_config(self.config)
        self.suite_plan = self.plan.replace(sample_count=Config.SUITE_SAMPLE_COUNT)
        self.values: Dict[str, Any] = {}
        self.loop: Optional[TripleLoop] = None

    def run(self, ring: Union[str, RingSpec] = DEFAULT_RING) -> PipelineResult:
        """Run every stage in order; the first failing stage stops the pipeline.

        Malformed ring input raises (SpecParseError, RingValidationError) and
        is an input error, not a stage failure.
        """
        self.values = {key: None for _, key in FIXED_KEYS}
        logger.info(f"🚀 Starting verify-paper (seed {self.plan.seed}, {self.plan.threads} threads)")
        spec = resolve_ring(ring)

        failure: Optional[StageFailure] = None
        try:
            parts = self.stage_ring(spec)
            loop = self.stage_loop(spec, parts)
            self.stage_certify(loop)
            self.stage_inner_group(loop)
            self.stage_structure(loop)
            self.stage_series(loop)
            self.stage_suites(loop)
            self.stage_theorem(loop)
        except StageFailure as e:
            logger.error(f"❌ {e}")
            failure = e

        report = self.build_report(failure)
        if failure is None:
            logger.info(f"✅ verify-paper passed: class {self.values['class']}, "
                        f"|Inn| = {self.values['inn.order']}")
        return PipelineResult(report, failure is None,
                              failure.stage if failure else None, failure.witness if failure else None)

    def build_report(self, failure: Optional[StageFailure]) -> Report:
        report = Report()
        for section, key in FIXED_KEYS:
            report.add(section, key, self.values.get(key))
        if failure is not None:
            report.add('stage', 'stage.failed', failure.stage)
            report.add('stage', 'stage.witness', failure.witness)
        return report

    def _describe(self, witness) -> str:
        if witness is None:
            return 'no witness recorded'
        name, values = witness
        if self.loop is not None and all(isinstance(v, (int, np.integer)) for v in values):
            values = tuple(self.loop.describe(int(v)) for v in values)
        return f"{name} at {values}"

    def _require(self, stage: str, report: SuiteReport, strict: bool = False):
        """Fail the stage when the report fails, or when strict and anything is vacuous."""
        if not report.ok:
            raise StageFailure(stage, self._describe(report.first_witness()))
        if strict and not report.all_passed:
            vacuous = [item.name for item in report.items if not item.passed]
            raise StageFailure(stage, f"vacuous items: {', '.join(vacuous)}")

    def stage_ring(self, spec: RingSpec):
        logger.info("📊 Stage ring: axioms and graded parts")
        axioms = check_ring_axioms(spec, self.plan.witness_limit)
        self.values['ring.ok'] = axioms.ok
        if not axioms.ok:
            name, witness = axioms.first_witness()
            raise StageFailure('ring', f"{name} at {witness}")

        parts = graded_parts(spec)
        self.values['x1.size'], self.values['x2.size'], self.values['x3.size'] = parts.sizes
        # recorded only; the construction needs no disjointness
        for key, count in parts.overlaps.items():
            self.values[f"{key}.overlap"] = count
        return parts

    def stage_loop(self, spec: RingSpec, parts) -> TripleLoop:
        logger.info("📊 Stage loop: construction, Latin check, Moufang suite")
        loop = TripleLoop(spec, parts)
        self.loop = loop
        self.values['loop.order'] = loop.order
        self._require('latin', verify_latin(loop, self.plan))

        moufang = check_moufang(loop, self.plan)
        self.values['moufang.ok'] = moufang.ok
        self._require('moufang', moufang)
        return loop

    def stage_certify(self, loop: TripleLoop):
        logger.info("📊 Stage certification: bracket forms and inner form")
        forms = certify_bracket_forms(loop, self.plan)
        self.values['forms.certified'] = forms.ok
        self._require('forms', forms)

        inner = certify_inner_form(loop, self.plan)
        self.values['inn.certified'] = inner.ok
        self._require('inner-form', inner)

    def stage_inner_group(self, loop: TripleLoop):
        logger.info("📊 Stage inner mapping group")
        inn = inner_group_closure(loop)
        self.values['inn.order'] = inn.order
        self.values['inn.abelian'] = inn.abelian
        self.values['inn.exponent'] = inn.exponent
        if not inn.complete:
            raise StageFailure('inn', f"closure incomplete after {inn.order} elements")
        if inn.order != loop.n1 * loop.n2:
            raise StageFailure('inn', f"|Inn| = {inn.order}, expected |X1|·|X2| = {loop.n1 * loop.n2}")

    def stage_structure(self, loop: TripleLoop):
        logger.info("📊 Stage structure: center, nucleus, iterated commutator")
        z = center(loop, self.plan)
        x3 = loop.encode(0, 0, np.arange(loop.n3))
        contains_x3 = bool(z.mask[x3].all())
        self.values['center.contains_x3'] = contains_x3
        self.values['center.order'] = z.order
        if not contains_x3:
            missing = int(x3[~z.mask[x3]][0])
            raise StageFailure('center', f"{loop.describe(missing)} is not central")

        n = nucleus(loop, self.plan)
        bc = np.arange(loop.n2 * loop.n3)
        contains_bc = bool(n.mask[bc].all())
        self.values['nucleus.contains_bc'] = contains_bc
        if not contains_bc:
            missing = int(bc[~n.mask[bc]][0])
            raise StageFailure('nucleus', f"{loop.describe(missing)} is not nuclear")

        basis = loop.spec.x1_basis
        if len(basis) < 3:
            raise StageFailure('triple-commutator', f"needs three x1 basis elements, ring has {len(basis)}")
        x, y, w = (loop.element(a=f"e{i}") for i in basis[:3])
        value = int(commutator(loop, commutator(loop, x, y), w))
        self.values['triple_comm.e123'] = loop.describe(value)
        if value == 0:
            raise StageFailure('triple-commutator', f"[[x,y],z] = 1 at {loop.describe(x)}, "
                                                    f"{loop.describe(y)}, {loop.describe(w)}")

    def stage_series(self, loop: TripleLoop):
        logger.info("📊 Stage upper central series")
        series = upper_central_series(loop, plan=self.plan)
        self.values['class'] = series.verdict()
        if series.nilpotency_class != 3:
            raise StageFailure('class', f"class = {series.verdict()}, orders {series.orders}")

    def stage_suites(self, loop: TripleLoop):
        logger.info(f"📊 Stage suites ({self.suite_plan.sample_count} tuples)")
        bruck = run_suite(loop, 'bruck-battery', self.suite_plan)
        self.values['suites.bruck_battery'] = bruck.status
        self._require('bruck-battery', bruck, strict=True)

        compose = run_suite(loop, 't-compose', self.suite_plan)
        self.values['suites.t_compose'] = compose.status
        self._require('t-compose', compose, strict=True)

    def stage_theorem(self, loop: TripleLoop):
        logger.info("📊 Stage odd-order theorem harness")
        harness = theorem_harness(loop, 'odd-order', self.plan)
        self.values['theorem.odd_order'] = harness.verdict
        if harness.verdict == VIOLATION:
            raise StageFailure('theorem', f"odd-order hypotheses hold but class = {harness.metadata['class']}")
