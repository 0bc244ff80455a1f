"""
Tests for the 8-state RSC constituent encoder.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.cli.selftest import DEFAULT_GOLDEN, load_golden
from src.coding.rsc import MEMORY, STATE_COUNT, build_trellis, encode, reference_parity

bit_lists = st.lists(st.integers(min_value=0, max_value=1), min_size=1, max_size=64)


class TestTrellis:

    def setup_method(self, method):
        self.trellis = build_trellis()

    def test_shape(self):
        assert self.trellis.state_count == STATE_COUNT
        assert self.trellis.next_state.shape == (STATE_COUNT, 2)

    def test_every_state_terminates_in_three_steps(self):
        for start in range(STATE_COUNT):
            state = start
            for _ in range(MEMORY):
                state = self.trellis.next_state[state, self.trellis.termination_input[state]]
            assert state == 0

    def test_inputs_reach_distinct_states(self):
        for state in range(STATE_COUNT):
            assert self.trellis.next_state[state, 0] != self.trellis.next_state[state, 1]


class TestEncode:

    def setup_method(self, method):
        self.trellis = build_trellis()

    def test_impulse_response(self):
        out = encode(np.array([1, 0, 0, 0, 0, 0, 0]), self.trellis)
        assert out.parity.tolist() == [1, 1, 1, 1, 0, 0, 1]

    def test_golden_vectors(self):
        """Test table-driven and shift-register encoders against the golden file."""
        for bits, parity in load_golden(DEFAULT_GOLDEN):
            assert encode(bits, self.trellis).parity.tolist() == parity.tolist()
            assert reference_parity(bits) == parity.tolist()

    def test_all_zero(self):
        out = encode(np.zeros(20, dtype=np.int64), self.trellis)
        assert not out.parity.any()
        assert not out.tail_systematic.any() and not out.tail_parity.any()
        assert out.final_state == 0

    @settings(max_examples=60, deadline=None)
    @given(bit_lists)
    def test_terminates_to_zero(self, bits):
        out = encode(np.array(bits), self.trellis)
        assert out.final_state == 0
        assert out.tail_systematic.size == MEMORY and out.tail_parity.size == MEMORY

    @settings(max_examples=60, deadline=None)
    @given(bit_lists)
    def test_matches_shift_register(self, bits):
        assert encode(np.array(bits), self.trellis).parity.tolist() == reference_parity(bits)

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_linearity(self, data):
        """Test that parity of a XOR b equals parity(a) XOR parity(b)."""
        a = data.draw(bit_lists)
        b = data.draw(st.lists(st.integers(0, 1), min_size=len(a), max_size=len(a)))
        a, b = np.array(a), np.array(b)
        pa = encode(a, self.trellis).parity
        pb = encode(b, self.trellis).parity
        assert np.array_equal(encode(a ^ b, self.trellis).parity, pa ^ pb)

    def test_corrupted_golden_is_detected(self, tmp_path):
        path = tmp_path / "golden.txt"
        path.write_text(DEFAULT_GOLDEN.read_text().replace("parity 1001", "parity 1011"))
        mismatches = [
            bits.tolist()
            for bits, parity in load_golden(path)
            if encode(bits, self.trellis).parity.tolist() != parity.tolist()
        ]
        assert mismatches == [[1, 1, 0, 1]]

    def test_golden_parser_rejects_junk(self, tmp_path):
        path = tmp_path / "golden.txt"
        path.write_text("parity 0101\n")
        with pytest.raises(ValueError):
            load_golden(path)
