# Suites package
