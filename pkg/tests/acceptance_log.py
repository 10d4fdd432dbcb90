"""Shared record of acceptance-criterion outcomes for the end-of-run summary."""

RESULTS: dict = {}


def record(key: int, ok: bool, detail: str) -> None:
    RESULTS[key] = (ok, detail)
    print(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
