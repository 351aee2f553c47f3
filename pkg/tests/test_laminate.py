import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from igacuf.errors import MaterialError
from igacuf.laminate import Lamina, Layup, Ply, compliance_3d, rotate_to_laminate, stiffness_3d, strain_rotation

from oracles import orthotropic_stiffness, rotate_tensor

TABLE3 = dict(E1=132.38, E2=10.756, E3=10.756, G12=3.606, G13=5.6537, G23=5.6537,
              nu12=0.24, nu13=0.24, nu23=0.49)


class TestStiffness:
    def test_isotropic_closed_form(self):
        E, nu = 7.0, 0.3
        G = E / (2 * (1 + nu))
        C = stiffness_3d(Lamina(E, E, E, G, G, G, nu, nu, nu))
        lam = E * nu / ((1 + nu) * (1 - 2 * nu))
        assert C[0, 0] == pytest.approx(E * (1 - nu) / ((1 + nu) * (1 - 2 * nu)), rel=1e-13)
        assert C[0, 1] == pytest.approx(lam, rel=1e-13)
        assert C[5, 0] == pytest.approx(lam, rel=1e-13)
        np.testing.assert_allclose(np.diag(C)[2:5], G, rtol=1e-13)

    def test_compliance_inversion_oracle(self):
        C = stiffness_3d(Lamina(**TABLE3))
        np.testing.assert_allclose(C, orthotropic_stiffness(**TABLE3), rtol=1e-12)
        np.testing.assert_allclose(C @ compliance_3d(Lamina(**TABLE3)), np.eye(6), atol=1e-12)

    def test_zero_poisson_decouples(self):
        C = stiffness_3d(Lamina(3.0, 2.0, 1.5, 0.4, 0.3, 0.2, 0.0, 0.0, 0.0))
        np.testing.assert_allclose(C, np.diag([3.0, 2.0, 0.4, 0.3, 0.2, 1.5]), atol=1e-15)

    def test_defaults_of_transverse_isotropy(self):
        lam = Lamina.transversely_isotropic(25, 1, 0.5, 0.5, 0.2, 0.25)
        assert (lam.E3, lam.nu13, lam.nu23) == (1, 0.25, 0.25)

    def test_inadmissible_material(self):
        with pytest.raises(MaterialError):
            stiffness_3d(Lamina(1.0, 1.0, 1.0, 0.4, 0.4, 0.4, 0.7, 0.7, 0.7))

    def test_nonpositive_modulus(self):
        with pytest.raises(MaterialError):
            stiffness_3d(Lamina(-1.0, 1.0, 1.0, 0.4, 0.4, 0.4, 0.2, 0.2, 0.2))


class TestRotation:
    C = orthotropic_stiffness(**TABLE3)

    def test_identity(self):
        np.testing.assert_allclose(rotate_to_laminate(self.C, 0.0).full(), self.C, atol=1e-12)

    def test_quarter_turn_swaps_axes(self):
        R = rotate_to_laminate(self.C, np.pi / 2).full()
        assert R[0, 0] == pytest.approx(self.C[1, 1], rel=1e-12)
        assert R[1, 1] == pytest.approx(self.C[0, 0], rel=1e-12)
        assert R[3, 3] == pytest.approx(self.C[4, 4], rel=1e-12)
        assert R[4, 4] == pytest.approx(self.C[3, 3], rel=1e-12)

    @pytest.mark.parametrize("theta", [np.pi / 4, np.pi / 12, -0.7, 2.1])
    def test_tensor_oracle(self, theta):
        R = rotate_to_laminate(self.C, theta).full()
        np.testing.assert_allclose(R, rotate_tensor(self.C, theta), atol=1e-10 * np.abs(self.C).max())

    def test_coupling_terms_appear_at_45(self):
        C = orthotropic_stiffness(25, 1, 1, 0.5, 0.5, 0.2, 0.25, 0.25, 0.25)
        R = rotate_to_laminate(C, np.pi / 4).full()
        assert abs(R[0, 2]) > 1 and abs(R[1, 2]) > 1 and abs(R[3, 4]) > 0.1

    @settings(max_examples=40, deadline=None)
    @given(st.floats(-np.pi, np.pi), st.floats(-np.pi, np.pi))
    def test_composition(self, a, b):
        np.testing.assert_allclose(strain_rotation(a) @ strain_rotation(b), strain_rotation(a + b), atol=1e-12)

    def test_blocks_symmetric(self):
        B = rotate_to_laminate(self.C, 0.3)
        np.testing.assert_array_equal(B.Cnp, B.Cpn.T)
        assert np.all(np.linalg.eigvalsh(B.Cpp) > 0) and np.all(np.linalg.eigvalsh(B.Cnn) > 0)

    def test_shear_factor_scales_subblock(self):
        B = rotate_to_laminate(self.C, 0.5)
        S = B.with_shear_factor(0.25)
        np.testing.assert_allclose(S.Cnn[:2, :2], 0.25 * B.Cnn[:2, :2])
        assert S.Cnn[2, 2] == B.Cnn[2, 2]
        np.testing.assert_array_equal(S.Cpp, B.Cpp)


class TestLayup:
    lam = Lamina.transversely_isotropic(25, 1, 0.5, 0.5, 0.2, 0.25)

    def test_interfaces(self):
        lay = Layup.equal(self.lam, np.radians([0, 90, 90, 0]), 0.2)
        np.testing.assert_allclose(lay.interfaces, [-0.1, -0.05, 0, 0.05, 0.1], atol=1e-16)

    def test_fractions_must_sum(self):
        with pytest.raises(ValueError):
            Layup((Ply(self.lam, 0.0, 0.5), Ply(self.lam, 0.0, 0.4)), 1.0)

    def test_layer_at_prefers_midplane_side(self):
        lay = Layup.equal(self.lam, np.radians([0, 90, 90, 0]), 1.0)
        assert lay.layer_at(0.25) == 2
        assert lay.layer_at(-0.25) == 1
        assert lay.layer_at(0.0) == 1
        assert lay.layer_at(0.4) == 3
        assert lay.layer_at(0.5) == 3
        with pytest.raises(ValueError):
            lay.layer_at(0.6)
