# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd
import scipy

from ..general import __version__
from ..tools import timestamp, get_hash

log = logging.getLogger(__name__)

FLOAT_FORMAT = '%.12e'
MANIFEST = 'manifest.json'

PLOT_TEMPLATES = {
    'branch': """\
import pandas as pd
import matplotlib.pyplot as plt

df = pd.read_csv('{csv}')
fig, ax = plt.subplots()
ax.plot(df['a'], df['omega'], 'o-', label='Lyapunov-Schmidt')
ax.plot(df['a'], df['omega_direct'], 'x--', label='Galerkin-Newton')
ax.set_xlabel('a')
ax.set_ylabel('ω(a)')
ax.legend()
fig.savefig('{stem}.png', dpi=150)
""",
    'phase_portrait': """\
import pandas as pd
import matplotlib.pyplot as plt

df = pd.read_csv('{csv}')
fig, ax = plt.subplots()
ax.quiver(df['c0'], df['c1'], df['h0'], df['h1'], df['r'])
ax.set_aspect('equal')
ax.set_xlabel('v₀')
ax.set_ylabel('v₁')
fig.savefig('{stem}.png', dpi=150)
""",
    'flow_check': """\
import pandas as pd
import matplotlib.pyplot as plt

df = pd.read_csv('{csv}')
fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True)
for cc in ['c0', 'c1']:
    ax1.plot(df['x'], df[cc + '_flow'], '-', label=cc + ' flow')
    ax1.plot(df['x'], df[cc + '_shift'], '.', label=cc + ' shift')
ax1.legend()
ax2.semilogy(df['x'], df['error'].clip(lower=1e-18))
ax2.set_xlabel('x')
fig.savefig('{stem}.png', dpi=150)
""",
    'decay': """\
import pandas as pd
import matplotlib.pyplot as plt

df = pd.read_csv('{csv}')
fig, ax = plt.subplots()
ax.loglog(df['N'], df['ratio'], 'o-')
ax.set_xlabel('N')
ax.set_ylabel('‖T u_N‖ / ‖u_N‖')
fig.savefig('{stem}.png', dpi=150)
""",
    'symbol': """\
import pandas as pd
import matplotlib.pyplot as plt

df = pd.read_csv('{csv}')
fig, ax = plt.subplots()
ax.semilogy(df['ell'], df['abs_d'])
ax.set_xlabel('ℓ')
ax.set_ylabel('|d(iℓ)|')
fig.savefig('{stem}.png', dpi=150)
""",
}


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return {'re': obj.real, 'im': obj.imag}
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def dumps(data):
    return json.dumps(data, indent=2, sort_keys=True, default=_json_default, ensure_ascii=False)


class RunArtifacts:
    """Output directory of one scenario run and the files written to it."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.files = []

    def _register(self, name):
        path = self.directory / name
        if name not in self.files:
            self.files.append(name)
        return path

    def table(self, name, frame):
        path = self._register(f"{name}.csv")
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        log.debug(f"Wrote {path}")
        return path

    def json(self, name, data):
        path = self._register(f"{name}.json")
        path.write_text(dumps(data) + '\n', encoding='utf-8')
        return path

    def plot_script(self, name, template):
        """A standalone matplotlib script reading '{name}.csv' next to it."""
        path = self._register(f"plot_{name}.py")
        path.write_text(PLOT_TEMPLATES[template].format(csv=f"{name}.csv", stem=name), encoding='utf-8')
        return path

    def checksums(self):
        return {name: get_hash(self.directory / name) for name in self.files}

    def manifest(self, scenario, summary=None):
        """Write manifest.json with versions, parameters and a blake2b
        checksum per emitted file."""
        data = {
            'nlwaves': __version__,
            'versions': {'numpy': np.__version__, 'scipy': scipy.__version__, 'pandas': pd.__version__},
            'scenario': scenario.to_dict(),
            'source': scenario.source,
            'timestamp': timestamp(),
            'files': self.checksums(),
            'summary': summary or {},
        }
        path = self.directory / MANIFEST
        path.write_text(dumps(data) + '\n', encoding='utf-8')
        return path


def verify_manifest(directory):
    """Names of the files whose checksum no longer matches the manifest."""
    directory = Path(directory)
    data = json.loads((directory / MANIFEST).read_text(encoding='utf-8'))
    return [name for name, digest in data['files'].items()
            if not (directory / name).is_file() or get_hash(directory / name) != digest]
