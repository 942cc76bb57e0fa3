"""Kernel backend selection.

Imports the compiled extension when present, otherwise the pure-Python
fallback.  Set SEMDEC_PURE_PYTHON=1 to force the fallback (used by the
benchmark and for debugging).
"""

import os

if os.environ.get("SEMDEC_PURE_PYTHON"):
    from semdec._kernels.pykernels import (  # noqa: F401
        BACKEND, mi_avg_counts, pmi_counts, rank_top2_counts,
    )
else:
    try:
        from semdec._kernels._cykernels import (  # type: ignore[no-redef]  # noqa: F401
            BACKEND, mi_avg_counts, pmi_counts, rank_top2_counts,
        )
    except ImportError:
        from semdec._kernels.pykernels import (  # noqa: F401
            BACKEND, mi_avg_counts, pmi_counts, rank_top2_counts,
        )
