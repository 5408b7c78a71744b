from typing import List, Optional
import logging

from src.checks import (
    BaselineChecks,
    DeflationChecks,
    DerivativeChecks,
    FilterChecks,
    OperatorChecks,
    PropertyResult,
)

logger = logging.getLogger(__name__)


class ValidationSuite:
    """
    Runs every property check of the solver and collects one result per property.

    A check that raises is reported as a failed property instead of stopping
    the suite.
    """
    def __init__(self, checks: Optional[List[object]] = None):
        if checks is None:
            checks = [DerivativeChecks(), OperatorChecks(), DeflationChecks(), FilterChecks(), BaselineChecks()]
        self.checks = checks
        logger.info(f"ValidationSuite initialized with checks: {[c.__class__.__name__ for c in self.checks]}")

    def run(self) -> List[PropertyResult]:
        results: List[PropertyResult] = []
        for check in self.checks:
            check_name = check.__class__.__name__
            try:
                results.extend(check.run())
            except Exception as e:
                logger.error(f"ValidationSuite: {check_name} failed: {e}", exc_info=True)
                results.append(PropertyResult(check_name, False, float("inf"), 0.0, error=str(e)))
        failed = [r.name for r in results if not r.passed]
        if failed:
            logger.warning(f"{len(failed)} propert{'y' if len(failed) == 1 else 'ies'} failed: {failed}")
        return results

    def all_passed(self, results: Optional[List[PropertyResult]] = None) -> bool:
        results = self.run() if results is None else results
        return all(r.passed for r in results)


def validate_suite() -> List[PropertyResult]:
    return ValidationSuite().run()
