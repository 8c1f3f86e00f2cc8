"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the NumPy
fallback in ``_kernels_py`` is used.  Both expose identical functions with
bit-identical results, so the choice only affects speed.

Set ``CHORDSPEC_BACKEND=python`` to force the fallback (used by the backend
parity tests and the benchmark), or ``CHORDSPEC_BACKEND=c`` to require the
extension and fail loudly if it is missing.
"""

import os

_requested = os.environ.get("CHORDSPEC_BACKEND", "").strip().lower()

if _requested in ("python", "py", "pure"):
    from chordspec import _kernels_py as kernels
elif _requested in ("c", "compiled", "cython"):
    from chordspec import _ckernels as kernels  # type: ignore[no-redef]
elif _requested == "":
    try:
        from chordspec import _ckernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from chordspec import _kernels_py as kernels
else:
    raise RuntimeError(
        f"CHORDSPEC_BACKEND={_requested!r} not understood; use 'c' or 'python'"
    )

backend_name: str = kernels.BACKEND_NAME
