# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import hashlib
from pathlib import Path

import pandas as pd

HASH_CHUNK = 1 << 20


def timestamp():
    """Current UTC time to the second, as recorded in manifests and reports."""
    return pd.Timestamp.now(tz='UTC').strftime("%Y-%m-%d %H:%M:%S")


def get_hash(path):
    """Hex blake2b digest of a written artifact."""
    digest = hashlib.blake2b()
    with Path(path).open('rb') as fid:
        for chunk in iter(lambda: fid.read(HASH_CHUNK), b''):
            digest.update(chunk)
    return digest.hexdigest()
