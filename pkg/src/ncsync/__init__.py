"""XOR network-coded all-to-all broadcast data synchronization simulator."""

from ._kernels import USING_NUMBA
from .codec import (
    AlreadyKnown,
    BlockStore,
    Decodable,
    KnowledgeSet,
    Packet,
    Undecodable,
    classify,
    decode,
    encode,
)
from .experiment import ExperimentRecord, SweepConfig, run_sweep, write_csv
from .selection import DbsResult, NsResult, candidate_pool, dbs, dbs_single, ns
from .sim import Scheme, SimConfig, SimResult, run
from .topology import Topology, from_edges, generate_connected, generate_geometric

__version__ = "0.1.0"

__all__ = [
    "AlreadyKnown",
    "BlockStore",
    "Decodable",
    "DbsResult",
    "ExperimentRecord",
    "KnowledgeSet",
    "NsResult",
    "Packet",
    "Scheme",
    "SimConfig",
    "SimResult",
    "SweepConfig",
    "Topology",
    "Undecodable",
    "USING_NUMBA",
    "candidate_pool",
    "classify",
    "dbs",
    "dbs_single",
    "decode",
    "encode",
    "from_edges",
    "generate_connected",
    "generate_geometric",
    "ns",
    "run",
    "run_sweep",
    "write_csv",
]
