"""Reference outcome counts for the 150-script study, and the metrics they imply."""

import json
from pathlib import Path

from lammps_lint.pipeline import StageRecord

CLASSES = ("Acc_C", "Acc_F", "PSZ_Acc_C", "PSZ_Acc_F", "PSZ_Exec_F", "Parser_F", "Sanitizer_F")
MODELS = ("GPT-4o", "GPT-4.1", "GPT-o3", "GPT-5", "Claude-4-Opus")

CLASS_TOTALS = {"Acc_C": 41, "Acc_F": 7, "PSZ_Acc_C": 18, "PSZ_Acc_F": 14, "PSZ_Exec_F": 31, "Parser_F": 35, "Sanitizer_F": 4}

# model -> (parser pass, execution success, one-shot accuracy) out of 30
BY_MODEL = {
    "GPT-4o": ("23/30 (77%)", "14/30 (47%)", "7/30 (23%)"),
    "GPT-4.1": ("24/30 (80%)", "21/30 (70%)", "7/30 (23%)"),
    "GPT-o3": ("17/30 (57%)", "10/30 (33%)", "8/30 (27%)"),
    "GPT-5": ("18/30 (60%)", "15/30 (50%)", "10/30 (33%)"),
    "Claude-4-Opus": ("29/30 (97%)", "20/30 (67%)", "9/30 (30%)"),
}

# prompt -> same metrics out of 50
BY_PROMPT = {
    "prompt1": ("46/50 (92%)", "42/50 (84%)", "33/50 (66%)"),
    "prompt2": ("41/50 (82%)", "34/50 (68%)", "7/50 (14%)"),
    "prompt3": ("24/50 (48%)", "4/50 (8%)", "1/50 (2%)"),
}

RECORDS_PATH = Path(__file__).parent / "fixtures" / "outcome_records.json"


def load_records() -> list[StageRecord]:
    return [StageRecord.from_dict(d) for d in json.loads(RECORDS_PATH.read_text())["records"]]
