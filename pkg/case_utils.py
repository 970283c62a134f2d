#!/usr/bin/env python3
"""Save payoff matrices and their verdicts as YAML test cases."""

import re
import yaml
import logging
from pathlib import Path
from typing import Dict, Any, Optional

from config import CASES_DIR
from models import ArbitrageVerdict, PayoffMatrix, format_rational


class CaseUtils:
    """Write cases in the format tests/test_data.py discovers."""

    def __init__(self, cases_dir: Optional[Path] = None):
        self.logger = logging.getLogger(__name__)
        self.cases_dir = cases_dir or CASES_DIR

    def generate_safe_filename(self, name: str) -> str:
        """Lowercase, underscores for whitespace, no special characters, at most 50 chars."""
        try:
            filename = re.sub(r'[^\w\s\-]', '', name)
            filename = re.sub(r'\s+', '_', filename.strip())
            filename = filename.lower()[:50]
            filename = re.sub(r'[\_\-]+$', '', filename)
            return filename if filename else "case"
        except Exception as e:
            self.logger.error(f"Error generating safe filename from {name}: {e}")
            return "case"

    def build_case(
        self,
        name: str,
        matrix: PayoffMatrix,
        verdict: ArbitrageVerdict,
        census_count: Optional[int] = None,
    ) -> Dict[str, Any]:
        """Case dictionary with every rational written as a 'p/q' string."""
        case: Dict[str, Any] = {
            'name': name,
            'matrix': matrix.A.to_strings(),
            'verdict': verdict.tag.value,
        }
        if verdict.is_arbitrage:
            case['portfolio'] = [format_rational(v) for v in verdict.certificate]
        else:
            case['state_prices'] = [format_rational(v) for v in verdict.certificate]
        if census_count is not None:
            case['census'] = census_count
        return case

    def save_as_case(
        self,
        name: str,
        matrix: PayoffMatrix,
        verdict: ArbitrageVerdict,
        census_count: Optional[int] = None,
    ) -> bool:
        """Write <cases_dir>/<safe name>.yaml; False if anything went wrong."""
        try:
            self.cases_dir.mkdir(parents=True, exist_ok=True)
            yaml_file = self.cases_dir / f"{self.generate_safe_filename(name)}.yaml"
            case = self.build_case(name, matrix, verdict, census_count)

            with open(yaml_file, 'w', encoding='utf-8') as f:
                f.write(f"# {matrix.m}x{matrix.n} payoff matrix, {verdict.describe()}\n")
                yaml.safe_dump(case, f, sort_keys=False, allow_unicode=True)

            self.logger.info(f"Saved case to {yaml_file}")
            return True

        except Exception as e:
            self.logger.error(f"Error saving case {name}: {e}")
            return False
