"""Small helpers for writing Graphviz DOT text."""


def quote(text: str) -> str:
    escaped = str(text).replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


def attrs(**kw) -> str:
    if not kw:
        return ""
    body = ", ".join(f"{k}={quote(v)}" for k, v in kw.items())
    return f" [{body}]"
