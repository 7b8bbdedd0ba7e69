from .client import Auth, ChatClient, ClientConfig, ClientError, MalformedResponse, MockClient, RateLimited, Transport
from .records import GradeRecord, ResponseRecord, read_jsonl, write_jsonl
from .report import CSV_HEADER, summarize, to_csv, to_markdown
from .runner import baseline_grade, grade_response, regrade, run_generation, run_recognition, run_trials

__all__ = [
    "Auth", "ChatClient", "ClientConfig", "ClientError", "MalformedResponse", "MockClient",
    "RateLimited", "Transport", "GradeRecord", "ResponseRecord", "read_jsonl", "write_jsonl",
    "CSV_HEADER", "summarize", "to_csv", "to_markdown", "baseline_grade", "grade_response",
    "regrade", "run_generation", "run_recognition", "run_trials",
]
