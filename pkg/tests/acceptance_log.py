"""Shared store for acceptance verdict lines."""

RESULTS: dict[int, str] = {}


def record(number: int, title: str, ok: bool, detail: str, seconds: float) -> str:
    line = f"{'PASS' if ok else 'FAIL'}  [{number}] {title}: {detail} ({seconds:.2f} s)"
    RESULTS[number] = line
    print(line)
    return line
