"""Per-run random streams.

Run r of an ensemble with master seed s draws from

    Generator(Philox(SeedSequence(entropy=s, spawn_key=(r,))))

Philox is counter-based, and SeedSequence hashes (s, r) into the Philox key,
so streams for different runs are independent whatever order they are
consumed in. Uniforms are consumed time-major, agent-ascending: at time t agent
i uses the (t - 1) * n + i -th double of its run's stream. Block size does not
change which uniform a given (t, i) receives.
"""

import numpy as np

# Steps of uniforms pre-drawn at once per run.
BLOCK_STEPS = 256


def run_generator(master_seed: int, run_index: int) -> np.random.Generator:
    """The generator that run `run_index` of an ensemble seeded with `master_seed` draws from."""
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(run_index,))
    return np.random.Generator(np.random.Philox(seq))


class RunStream:
    """Uniform source for one run, handed out one time step at a time."""

    def __init__(self, master_seed: int, run_index: int, n: int, block_steps: int = BLOCK_STEPS):
        self.master_seed = master_seed
        self.run_index = run_index
        self._gen = run_generator(master_seed, run_index)
        self._n = n
        self._block_steps = block_steps
        self._block = np.empty((0, n))
        self._pos = 0

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def next_block(self, steps: int) -> np.ndarray:
        """The next `steps` x n uniforms, continuing the stream."""
        out = np.empty((steps, self._n))
        filled = 0
        while filled < steps:
            if self._pos == self._block.shape[0]:
                self._block = self._gen.random((self._block_steps, self._n))
                self._pos = 0
            take = min(steps - filled, self._block.shape[0] - self._pos)
            out[filled:filled + take] = self._block[self._pos:self._pos + take]
            filled += take
            self._pos += take
        return out

    def next_step(self) -> np.ndarray:
        """Uniforms for the n agents at the next time step."""
        return self.next_block(1)[0]
