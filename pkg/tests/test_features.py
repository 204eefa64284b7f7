import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from conftest import make_sample, random_motion, tpose
from core.exceptions import DatasetError, FeatureError
from core.models.features import ANGLE_SET, FeatureVector, Representation
from core.models.skeleton import JointId
from core.services.features import (
    angle_between,
    compute_angles,
    dct_transform,
    extract_features,
    featurize,
    flatten_joints,
    inverse_dct_transform,
    load_feature_table,
    save_feature_table,
)


def _angle_index(name):
    return [a.name for a in ANGLE_SET].index(name)


class TestAngleBetween:
    @pytest.mark.parametrize("c, expected", [
        ((0, 1, 0), np.pi / 2),
        ((-1, 0, 0), np.pi),
        ((1, 1, 0), np.pi / 4),
    ])
    def test_reference_angles(self, c, expected):
        assert np.isclose(angle_between((1, 0, 0), (0, 0, 0), c), expected, atol=1e-12)

    def test_symmetric(self, rng):
        for _ in range(100):
            a, b, c = rng.normal(size=(3, 3))
            assert angle_between(a, b, c) == angle_between(c, b, a)

    def test_rigid_and_scale_invariance(self, rng):
        for _ in range(50):
            pts = rng.normal(size=(3, 3))
            rot = Rotation.random(random_state=int(rng.integers(1 << 30))).as_matrix()
            moved = 2.5 * pts @ rot.T + rng.normal(size=3)
            assert abs(angle_between(*pts) - angle_between(*moved)) < 1e-9

    def test_degenerate_ray(self):
        with pytest.raises(FeatureError, match="degenerate ray"):
            angle_between((1, 1, 1), (1, 1, 1), (0, 0, 0), triple="ElbowLeft")


class TestFlattenJoints:
    def test_length(self, small_dataset):
        assert len(flatten_joints(small_dataset[0])) == 9600

    def test_zero_sample(self):
        fv = flatten_joints(make_sample(np.zeros((160, 20, 3))))
        assert not fv.values.any()

    def test_index_layout(self, rng, small_dataset):
        sample = small_dataset[3]
        fv = flatten_joints(sample)
        for _ in range(20):
            k, j = int(rng.integers(160)), int(rng.integers(20))
            assert fv.values[3 * (20 * k + j)] == sample.frames[k, j, 0]
            assert fv.values[3 * (20 * k + j) + 2] == sample.frames[k, j, 2]

    def test_wrong_frame_count(self, small_dataset):
        with pytest.raises(FeatureError, match="expected 100"):
            flatten_joints(small_dataset[0], expected_frames=100)


class TestComputeAngles:
    def test_tpose_limbs_are_straight(self):
        fv = compute_angles(make_sample(np.repeat(tpose()[None], 160, axis=0)))
        assert len(fv) == 1600
        angles = fv.as_sequence()
        for name in ("ElbowLeft", "ElbowRight", "KneeLeft", "KneeRight"):
            assert np.allclose(angles[:, _angle_index(name)], np.pi, atol=1e-12)

    def test_right_angle_elbow(self):
        frame = tpose()
        frame[JointId.WRIST_LEFT] = frame[JointId.ELBOW_LEFT] + (0.0, 0.25, 0.0)
        frame[JointId.HAND_LEFT] = frame[JointId.ELBOW_LEFT] + (0.0, 0.5, 0.0)
        angles = compute_angles(make_sample(frame[None])).values
        assert abs(angles[_angle_index("ElbowLeft")] - np.pi / 2) < 1e-9

    def test_degenerate_ray_names_angle_and_frame(self):
        frames = np.repeat(tpose()[None], 3, axis=0)
        frames[2, JointId.KNEE_RIGHT] = frames[2, JointId.HIP_RIGHT]
        with pytest.raises(FeatureError, match="KneeRight.*frame 2"):
            compute_angles(make_sample(frames))


class TestDct:
    def _time_vector(self, series):
        return FeatureVector(np.asarray(series).reshape(-1), Representation.ANGLE_TIME)

    def test_constant_channel(self):
        T = 160
        series = np.full((T, 10), 0.75)
        coeffs = dct_transform(self._time_vector(series)).values.reshape(10, T)
        assert np.allclose(coeffs[:, 0], 0.75 * np.sqrt(T), atol=1e-12)
        assert np.max(np.abs(coeffs[:, 1:])) < 1e-12

    def test_basis_function(self):
        T = 160
        k = np.arange(T)
        basis = np.sqrt(2.0 / T) * np.cos(np.pi * (2 * k + 1) * 3 / (2 * T))
        series = np.zeros((T, 10))
        series[:, 4] = basis
        coeffs = dct_transform(self._time_vector(series)).values.reshape(10, T)
        assert np.isclose(coeffs[4, 3], 1.0, atol=1e-12)
        coeffs[4, 3] = 0.0
        assert np.max(np.abs(coeffs)) < 1e-12

    def test_matches_definition(self, rng):
        T = 12
        x = rng.normal(size=(T, 10))
        coeffs = dct_transform(self._time_vector(x)).values.reshape(10, T)
        k = np.arange(T)
        for m in range(T):
            c = np.sqrt(1.0 / T) if m == 0 else np.sqrt(2.0 / T)
            expected = c * (x * np.cos(np.pi * (2 * k + 1) * m / (2 * T))[:, None]).sum(axis=0)
            assert np.allclose(coeffs[:, m], expected, atol=1e-12)

    def test_round_trip_and_parseval(self, rng):
        for _ in range(100):
            T = int(rng.integers(2, 300))
            x = rng.normal(size=(T, 10))
            fv = self._time_vector(x)
            freq = dct_transform(fv)
            assert freq.rep is Representation.ANGLE_FREQ
            back = inverse_dct_transform(freq)
            assert np.max(np.abs(back.values - fv.values)) < 1e-9
            assert abs(np.linalg.norm(freq.values) - np.linalg.norm(fv.values)) < 1e-9 * np.linalg.norm(fv.values)

    def test_rejects_frequency_input(self, rng):
        freq = dct_transform(self._time_vector(rng.normal(size=(8, 10))))
        with pytest.raises(FeatureError):
            dct_transform(freq)


class TestExtractFeatures:
    @pytest.mark.parametrize("rep, dimension", [
        (Representation.JOINT_TIME, 9600),
        (Representation.ANGLE_TIME, 1600),
        (Representation.JOINT_FREQ, 9600),
        (Representation.ANGLE_FREQ, 1600),
    ])
    def test_dimensions(self, small_dataset, rep, dimension):
        fv = extract_features(small_dataset[0], rep)
        assert len(fv) == dimension == rep.dimension(160)
        assert fv.rep is rep

    def test_requires_preprocessed(self, small_raw_dataset):
        with pytest.raises(FeatureError, match="preprocessed"):
            extract_features(small_raw_dataset[0], Representation.JOINT_TIME)

    def test_synthetic_good_samples_have_no_degenerate_rays(self, small_dataset):
        table = featurize(small_dataset, Representation.ANGLE_TIME)
        assert np.isfinite(table.values).all()


class TestFeatureTable:
    def test_featurize_shapes(self, small_dataset):
        table = featurize(small_dataset, Representation.ANGLE_FREQ)
        assert table.values.shape == (24, 1600)
        assert sorted(set(table.subject_ids.tolist())) == [1, 2, 3]
        assert int((table.labels > 0).sum()) == 12

    def test_csv_round_trip(self, tmp_path, small_dataset):
        table = featurize(small_dataset, Representation.ANGLE_TIME)
        path = tmp_path / "features.csv"
        save_feature_table(table, path)
        loaded = load_feature_table(path, Representation.ANGLE_TIME, n_frames=160)
        assert np.array_equal(loaded.values, table.values)
        assert np.array_equal(loaded.labels, table.labels)
        assert np.array_equal(loaded.subject_ids, table.subject_ids)

    def test_dimension_mismatch_names_both(self, tmp_path, small_dataset):
        path = tmp_path / "features.csv"
        save_feature_table(featurize(small_dataset, Representation.ANGLE_TIME), path)
        with pytest.raises(FeatureError, match="1600.*9600"):
            load_feature_table(path, Representation.JOINT_TIME, n_frames=160)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DatasetError, match="not found"):
            load_feature_table(tmp_path / "missing.csv", Representation.JOINT_TIME)

    def test_unknown_label(self, tmp_path):
        path = tmp_path / "features.csv"
        path.write_text("subject_id,label," + ",".join(f"v{i}" for i in range(10)) + "\n"
                        + "1,fine," + ",".join("0.5" for _ in range(10)) + "\n")
        with pytest.raises(DatasetError, match="unknown label"):
            load_feature_table(path, Representation.ANGLE_TIME)

    def test_random_motion_table(self, rng):
        frames = random_motion(rng, 160)
        fv = compute_angles(make_sample(frames))
        assert np.isfinite(fv.values).all()
