"""Backend selection between the compiled kernels and the numpy fallback.

``DTMOD_BACKEND`` controls the choice: ``auto`` (default) prefers the compiled
extension and silently falls back, ``compiled`` requires it, ``python`` forces
the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

_choice = os.environ.get("DTMOD_BACKEND", "auto").lower()

if _choice not in {"auto", "compiled", "python"}:
    raise ImportError(f"DTMOD_BACKEND must be auto|compiled|python, got {_choice!r}")

if _choice == "python":
    impl = _kernels_py
else:
    try:
        from . import _kernels as impl  # type: ignore[no-redef]
    except ImportError:
        if _choice == "compiled":
            raise ImportError(
                "DTMOD_BACKEND=compiled but the dtmod._kernels extension is not built"
            )
        impl = _kernels_py

eval_table = impl.eval_table
diff_table = impl.diff_table
phi_values = impl.phi_values


def backend_name() -> str:
    return impl.BACKEND_NAME
