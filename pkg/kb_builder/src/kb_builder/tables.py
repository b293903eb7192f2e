"""Hand-maintained per-library knowledge that introspection cannot recover.

Aliases are import conventions, not module attributes. Constructor return
types are runtime behavior, not signatures. Both are curated here; the
builder drops any entry whose callable or type did not survive
introspection, so the tables may safely mention names a given installed
version lacks.
"""

CANONICAL_ALIASES = {
    "numpy": "np",
    "pandas": "pd",
    "matplotlib.pyplot": "plt",
    "requests": "requests",
    "json": "json",
}

# object types whose public methods get enumerated, per library
OBJECT_TYPES = {
    "numpy": ["ndarray"],
    "pandas": ["DataFrame", "Series"],
    "matplotlib.pyplot": ["Figure", "Axes"],
    "requests": ["Response"],
}

# callable -> type it returns; type must be listed in OBJECT_TYPES
CONSTRUCTORS = {
    "numpy": {
        "arange": "ndarray",
        "array": "ndarray",
        "asarray": "ndarray",
        "empty": "ndarray",
        "full": "ndarray",
        "linspace": "ndarray",
        "ones": "ndarray",
        "ones_like": "ndarray",
        "zeros": "ndarray",
        "zeros_like": "ndarray",
    },
    "pandas": {
        "DataFrame": "DataFrame",
        "Series": "Series",
        "concat": "DataFrame",
        "merge": "DataFrame",
        "read_csv": "DataFrame",
        "read_excel": "DataFrame",
        "read_json": "DataFrame",
        "read_parquet": "DataFrame",
        "read_pickle": "DataFrame",
        "read_table": "DataFrame",
    },
    "matplotlib.pyplot": {
        "axes": "Axes",
        "figure": "Figure",
        "gca": "Axes",
        "subplot": "Axes",
    },
    "requests": {
        "delete": "Response",
        "get": "Response",
        "head": "Response",
        "options": "Response",
        "patch": "Response",
        "post": "Response",
        "put": "Response",
        "request": "Response",
    },
}
