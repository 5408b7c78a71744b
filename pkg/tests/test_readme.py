import re
from pathlib import Path

from src.cli import build_parser
from src.config import ExperimentConfig
from src.harness.records import RESULT_COLUMNS


def test_readme_lists_result_columns():
    readme = Path("README.md").read_text()
    assert ",".join(RESULT_COLUMNS) in readme


def test_readme_commands_exist():
    readme = Path("README.md").read_text()
    commands = set(re.findall(r"python -m src\.cli (\w+)", readme))
    subparsers = next(a for a in build_parser()._actions if a.dest == "command")
    assert commands == set(subparsers.choices)


def test_every_config_key_is_documented():
    documented = set(re.findall(r"^\| `(\w+)` \|", Path("docs/configuration.md").read_text(), re.MULTILINE))
    assert set(ExperimentConfig.model_fields) <= documented


def test_example_configs_are_valid():
    for path in Path("configs").glob("*.json"):
        ExperimentConfig.model_validate_json(path.read_text())
