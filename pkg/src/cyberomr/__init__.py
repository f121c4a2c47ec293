"""cyberomr: desk-scale cyber observation, monitoring and reporting platform.

Subpackages:
    sim         deterministic site telemetry simulator with attack injection
    sensor      passive per-AoR analysis pipeline and authenticated uplink
    joc         operations-centre engine: ingestion, dispatch, batches, correlation
    reporting   SINCREP ticket lifecycle, daily SITREPs, exports and figures
    governance  technical assessment scoring and ceasefire compliance ledger
"""

__version__ = "0.1.0"
