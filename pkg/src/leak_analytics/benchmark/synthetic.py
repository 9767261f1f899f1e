"""Seeded generator of labeled flows for classifier experiments.

Illegal flows go to ad/analytics hosts and functional flows to service
hosts; path and query tokens are drawn from a pool shared by both classes
with a mild per-class bias. A second population of flows with decrypted
hostnames can use a host pool disjoint from the first.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..appmodel.catalog import DEFAULT_SOURCE_SAMPLES
from ..flows.flow_record import ILLEGAL, LEGAL, FlowRecord

ILLEGAL_HOSTS = ("ads.mobclix.com", "gad.ju6666.com", "log.umeng-stat.net", "track.adsmogo.com")
LEGAL_HOSTS = ("api.openweathermap.org", "maps.cityguide.io", "sync.notesapp.com", "login.bankmobile.com")
DECRYPTED_ILLEGAL_HOSTS = ("xml.meego91.com", "push.kuguo-sdk.org", "c.domob-ads.io", "stat.leadbolt.com")
DECRYPTED_LEGAL_HOSTS = ("cdn.photovault.net", "www.travelmate.com", "api.fitlog.net", "srv.chatline.com")
INNOCENT_HOSTS = ("static.imgserve.net", "update.appstore-cdn.com", "fonts.webassets.org")

ILLEGAL_PATHS = ("GetAd", "imp", "track", "report")
LEGAL_PATHS = ("forecast", "search", "sync", "account")
SHARED_PATHS = ("v1", "api", "data", "get", "req")
QUERY_KEYS = ("id", "q", "u", "lo", "lon", "d")
PLACEHOLDERS = ("IMEI", "IMSI", "LOCATION_LON", "LOCATION_LAT", "ANDROID_ID", "PHONE_NUMBER")

# Probability that a flow's first path token comes from its own class pool
CLASS_PATH_BIAS = 0.8


def _pick(rng: np.random.Generator, items: Sequence[str]) -> str:
    return items[int(rng.integers(len(items)))]


def _sensitive_flow(
    rng: np.random.Generator, app_id: str, label: str, hosts: Sequence[str], decrypted: bool
) -> FlowRecord:
    own = ILLEGAL_PATHS if label == ILLEGAL else LEGAL_PATHS
    other = LEGAL_PATHS if label == ILLEGAL else ILLEGAL_PATHS
    first = _pick(rng, own) if rng.random() < CLASS_PATH_BIAS else _pick(rng, other)
    data_type = _pick(rng, PLACEHOLDERS)
    prefix = f"{_pick(rng, hosts)}/{_pick(rng, SHARED_PATHS)}/{first}?&{_pick(rng, QUERY_KEYS)}="
    return FlowRecord(
        app_id=app_id,
        component="Main",
        trace=("onCreate",),
        sink_api="openConnection",
        url=prefix + DEFAULT_SOURCE_SAMPLES[data_type],
        url_template=f"{prefix}<{data_type}>",
        carried_taint=(data_type,),
        sensitive=True,
        label=label,
        hostname_decrypted=decrypted,
    )


def _innocent_flow(rng: np.random.Generator, app_id: str) -> FlowRecord:
    url = f"{_pick(rng, INNOCENT_HOSTS)}/{_pick(rng, SHARED_PATHS)}/{_pick(rng, ('logo.png', 'index', 'config'))}"
    return FlowRecord(
        app_id=app_id,
        component="Main",
        trace=("onCreate",),
        sink_api="openConnection",
        url=url,
        url_template=url,
    )


def generate_synthetic_flows(
    n_sensitive: int = 200,
    seed: Optional[int] = None,
    illegal_fraction: float = 0.5,
    n_non_sensitive: int = 0,
    n_decrypted: int = 0,
    shared_host_pool: bool = False,
) -> List[FlowRecord]:
    """Generate labeled flow records.

    Args:
        n_sensitive: Sensitive flows with plain hostnames
        seed: Random seed (required)
        illegal_fraction: Share of illegal flows in each sensitive population
        n_non_sensitive: Untainted flows to innocent hosts
        n_decrypted: Sensitive flows whose hostname came out of a decryption table
        shared_host_pool: Draw decrypted hosts from the plain host pools

    Returns:
        List[FlowRecord]: Plain flows, then decrypted flows, then non-sensitive flows;
        each flow has its own app id
    """
    if seed is None:
        raise ValueError("A seed is required to generate synthetic flows")
    if not 0.0 < illegal_fraction < 1.0:
        raise ValueError("illegal_fraction must be between 0 and 1")
    rng = np.random.default_rng(seed)
    records: List[FlowRecord] = []

    def population(count: int, pools: Tuple[Sequence[str], Sequence[str]], decrypted: bool, tag: str):
        n_illegal = int(round(count * illegal_fraction))
        for i in range(count):
            label = ILLEGAL if i < n_illegal else LEGAL
            hosts = pools[0] if label == ILLEGAL else pools[1]
            records.append(_sensitive_flow(rng, f"{tag}{i:04d}", label, hosts, decrypted))

    population(n_sensitive, (ILLEGAL_HOSTS, LEGAL_HOSTS), False, "plain")
    decrypted_pools = (
        (ILLEGAL_HOSTS, LEGAL_HOSTS) if shared_host_pool else (DECRYPTED_ILLEGAL_HOSTS, DECRYPTED_LEGAL_HOSTS)
    )
    population(n_decrypted, decrypted_pools, True, "enc")
    for i in range(n_non_sensitive):
        records.append(_innocent_flow(rng, f"net{i:04d}"))
    return records
