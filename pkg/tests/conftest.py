import numpy as np

from irsrelay.channel import ChannelSet, Geometry, LinkBudget, sample_channels

P_S = 10.0
P_R = 10.0
NOISE_30DB = 0.02  # (p_s + p_r) / 10**(30/10)


def make_channels(m, n, seed, geometry=None, budget=None):
    return sample_channels(
        geometry if geometry is not None else Geometry(),
        budget if budget is not None else LinkBudget(),
        m=m,
        n=n,
        seed=seed,
    )


def manual_channels(h_sr, H_ir, h_si, h_rd=None, h_id=None, H_ri=None):
    """ChannelSet from explicit first-slot blocks; second slot defaults to ones."""
    h_sr = np.asarray(h_sr, dtype=np.complex128)
    H_ir = np.asarray(H_ir, dtype=np.complex128)
    h_si = np.asarray(h_si, dtype=np.complex128)
    m, n = H_ir.shape
    return ChannelSet(
        h_sr=h_sr,
        H_ir=H_ir,
        h_si=h_si,
        h_rd=np.ones(m, dtype=np.complex128) if h_rd is None else np.asarray(h_rd, dtype=np.complex128),
        h_id=np.ones(n, dtype=np.complex128) if h_id is None else np.asarray(h_id, dtype=np.complex128),
        H_ri=np.ones((m, n), dtype=np.complex128) if H_ri is None else np.asarray(H_ri, dtype=np.complex128),
    )
