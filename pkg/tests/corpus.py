import json
from functools import lru_cache

from gelspec import data_path, load_poset

BUNDLED = ["m2_chain", "m2_two", "m4_chain", "mermin_peres", "cabello18", "ten_m4"]
SMALL = ["m2_chain", "m2_two", "m4_chain"]
WITH_TRIVIAL = BUNDLED  # every bundled file gets C·1 inserted


@lru_cache(maxsize=None)
def bundled(name):
    return load_poset(data_path(f"{name}.json"))


def raw(name):
    with open(data_path(f"{name}.json")) as fh:
        return json.load(fh)
