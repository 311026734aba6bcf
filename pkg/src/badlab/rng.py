"""Counter-based random streams.

Every randomized routine draws from a Philox generator keyed by
(seed, stream id).  Streams are independent, so work can be partitioned
across threads in chunks of fixed size without affecting the draws; results
are merged in chunk order, which makes outputs identical for any thread
count.  Rejection retries simply consume further draws within the stream.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

# stream-id bases per subsystem, so distinct experiments never share streams
STREAM_SAMPLER = 1 << 32
STREAM_FOURIER = 2 << 32
STREAM_FROSTMAN = 3 << 32
STREAM_LACUNARY = 4 << 32
STREAM_LITTLEWOOD = 5 << 32
STREAM_OSCINT = 6 << 32

CHUNK = 4096


def stream_generator(seed: int, stream: int) -> np.random.Generator:
    """An independent Philox stream keyed by (seed, stream)."""
    key = np.array([np.uint64(seed & (2**64 - 1)), np.uint64(stream & (2**64 - 1))])
    return np.random.Generator(np.random.Philox(key=key))


def map_chunks(fn, n_items: int, threads: int = 1, chunk: int = CHUNK):
    """Run fn(start, stop, chunk_index) over fixed chunks; results returned
    in chunk order regardless of the executor, so the reduction order (and
    hence any float accumulation) is independent of the thread count."""
    spans = [
        (start, min(start + chunk, n_items), i)
        for i, start in enumerate(range(0, n_items, chunk))
    ]
    if threads <= 1:
        return [fn(*span) for span in spans]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, *span) for span in spans]
        return [f.result() for f in futures]
