"""Select the compiled core when available.

Set ``BANDLAB_PURE_PYTHON=1`` to force the numpy implementation.
"""

import os

from . import _purepy

if os.environ.get("BANDLAB_PURE_PYTHON", "") not in ("", "0"):
    impl = _purepy
    NAME = "python"
else:
    try:
        from . import _core as impl
    except ImportError:
        impl = _purepy
        NAME = "python"
    else:
        NAME = "cython"

advance_pde = impl.advance_pde
kernel_convolve = impl.kernel_convolve
OK, NONFINITE, NEGATIVE = _purepy.OK, _purepy.NONFINITE, _purepy.NEGATIVE
