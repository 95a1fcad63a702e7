import pytest

from dtmod import harness


@pytest.fixture(scope="session")
def campaign():
    """Session-cached campaign runner so claim sweeps run once per session."""
    cache = {}

    def run(claim, seed=7, **params):
        key = (claim, seed, tuple(sorted(params.items())))
        if key not in cache:
            spec = harness.CampaignSpec(claim=claim, seed=seed,
                                        cfg=harness.campaign_config(),
                                        params=params or None)
            cache[key] = harness.run_campaign(spec)
        return cache[key]

    return run
