# tlmembed module for Python
# Lindblad embeddings of time-local master equations
# Copyright: the tlmembed authors, 2026
# License: 3-clause BSD, see LICENSE file

import sys

from tlmembed.cli import main

sys.exit(main())
