import random

import pytest

import soft_mceliece as sm


def small_params(sigma=0.3):
    return sm.SystemParams(2, 101, 5, sigma)


def test_params_and_presets():
    p = sm.SystemParams.preset_80()
    assert (p.n0, p.r, p.d_v, p.t_lower) == (2, 3601, 45, 84)
    assert p.n == 7202 and p.k == 3601
    assert p.t_hat == pytest.approx(84, abs=0.5)
    with pytest.raises(sm.InvalidParams, match="odd"):
        sm.SystemParams(2, 100, 5, 0.3)


def test_keys_roundtrip_through_bytes():
    kp = sm.keygen(small_params(), 7)
    assert sm.parity_relation_holds(kp.private_key, kp.public_key)
    assert kp.public_key.payload_bits == 101
    assert sm.PublicKey.from_bytes(kp.public_key.to_bytes()) == kp.public_key
    assert sm.PrivateKey.from_bytes(kp.private_key.to_bytes()) == kp.private_key
    assert all(len(s) == 5 for s in kp.private_key.supports())
    with pytest.raises(sm.FormatError):
        sm.PublicKey.from_bytes(b"junk")


def test_block_encrypt_decrypt():
    p = small_params(0.25)
    kp = sm.keygen(p, 1)
    rng = random.Random(3)
    msg = [rng.randint(0, 1) for _ in range(p.k)]
    ct = sm.encrypt(msg, kp.public_key, 11)
    assert len(ct.codes) == p.n
    assert sm.encrypt(msg, kp.public_key, 11).codes == ct.codes
    assert sm.decrypt(ct, kp.private_key) == msg
    again = sm.Ciphertext.from_bytes(ct.to_bytes())
    assert sm.decrypt(again, kp.private_key) == msg
    with pytest.raises(sm.SizeMismatch):
        sm.encrypt(msg[:-1], kp.public_key, 1)


def test_byte_stream_roundtrip():
    p = small_params(0.25)
    kp = sm.keygen(p, 2)
    data = bytes(range(256)) * 2
    stream = sm.encrypt_bytes(data, kp.public_key, 5)
    assert sm.decrypt_bytes(stream, kp.private_key) == data
    other = sm.keygen(p, 99)
    # A wrong key either fails to decode or lands on a codeword whose
    # padding does not parse.
    try:
        assert sm.decrypt_bytes(stream, other.private_key) is None
    except sm.FormatError:
        pass


def test_work_factors_and_report():
    assert sm.wf_isd(7202, 3601, 84, "bjmm") <= sm.wf_isd(7202, 3601, 84, "stern")
    assert sm.wf_isd(7202, 3601, 84, "stern") <= sm.wf_isd(7202, 3601, 84, "prange")
    rep = sm.security_report(sm.SystemParams.preset_80())
    assert rep["wf_da_hard"] == pytest.approx(80.49, abs=0.5)
    assert rep["wf_kra"] == pytest.approx(80.17, abs=0.5)
    assert rep["de_verdict"] and not rep["insecure"]
    assert len(rep["tf_curve"]) == 85
    with pytest.raises(sm.InvalidParams):
        sm.security_report(sm.SystemParams.preset_80(), "nope")


def test_order_statistics():
    probs = sm.p_err_ordered_all(200, 0.44091)
    assert sum(probs) == pytest.approx(sm.expected_errors(200, 0.44091), rel=1e-3)
    assert sm.p_flip_success(1, 200, 0.44091) == pytest.approx(probs[-1])
    assert sm.p_flip_success_joint(3, 200, 0.44091) >= sm.p_flip_success(3, 200, 0.44091)
    freq = sm.ordered_error_oracle(50, 0.5, 2000, 1)
    assert len(freq) == 50 and freq[-1] > freq[0]
    succ, ok, rate = sm.soft_attack_demo(100, 0.5, 0, 10, 1)
    assert rate == 1.0 and succ == ok == 10


def test_density_evolution():
    s, lo, hi = sm.de_threshold(3, "1/2", 1e-2)
    assert lo <= 0.8809 <= hi + 1e-2
    assert sm.de_converges(3, 6, 0.8)
    assert not sm.de_converges(3, 6, 0.95)


def test_dfr_batch():
    res = sm.dfr_trial_batch(small_params(0.2), 20, 4)
    assert res["trials"] == 20
    assert res["failures"] == 0 and res["miscorrections"] == 0
