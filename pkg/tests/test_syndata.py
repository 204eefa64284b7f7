import numpy as np
import pytest

from core.exceptions import GeneratorError
from core.models.skeleton import EXERCISES, JointId, Label
from core.services.features import angle_between
from syndata.generator import (
    FRAME_RANGE,
    IncompletePhase,
    Limb,
    RestrictedExtension,
    SubjectProfile,
    TempoJitter,
    generate_dataset,
    generate_sample,
    plan_dataset,
)
from syndata.templates import ANKLE_HEIGHT, FOREARM, UPPER_ARM, builtin_template, canonical_exercise

ARMS = (
    (JointId.SHOULDER_LEFT, JointId.ELBOW_LEFT, JointId.WRIST_LEFT),
    (JointId.SHOULDER_RIGHT, JointId.ELBOW_RIGHT, JointId.WRIST_RIGHT),
)


@pytest.fixture(scope="module")
def blast_off():
    return builtin_template("Blast-Off")


def _clean_and_restricted(template, factor=0.6, n_frames=80):
    profile = SubjectProfile(subject_id=1)
    clean = generate_sample(template, profile, (), n_frames=n_frames).frames
    restricted = generate_sample(template, profile, (RestrictedExtension(Limb.BOTH, factor),), n_frames=n_frames).frames
    return clean, restricted


class TestTemplates:
    def test_blast_off_phases(self, blast_off):
        assert blast_off.phase_times == (0.0, 0.5, 1.0)
        assert not blast_off.illustrative
        seated, back, up = blast_off.poses
        head = JointId.HEAD
        for shoulder, _, wrist in ARMS:
            assert seated[wrist, 2] > seated[shoulder, 2] + 0.5
            assert back[wrist, 2] < back[shoulder, 2]
            assert up[wrist, 1] > up[head, 1]

    def test_standing_is_taller_than_seated(self, blast_off):
        seated, _, up = blast_off.poses
        assert up[JointId.HEAD, 1] > seated[JointId.HEAD, 1] + 0.3

    @pytest.mark.parametrize("exercise", EXERCISES)
    def test_keyframes_are_grounded(self, exercise):
        template = builtin_template(exercise)
        ankles = template.poses[:, [JointId.ANKLE_LEFT, JointId.ANKLE_RIGHT]]
        assert np.allclose(ankles[:, :, 1].min(axis=1), ANKLE_HEIGHT)
        assert np.allclose(ankles[:, :, 0].mean(axis=1), 0.0)

    def test_names(self):
        assert canonical_exercise("blast off") == "Blast-Off"
        assert canonical_exercise("TAKE_A_BOW") == "Take-A-Bow"
        with pytest.raises(GeneratorError, match="unknown exercise 'jumping'"):
            builtin_template("jumping")

    def test_trajectory_passes_through_keyframes(self, blast_off):
        frames = blast_off.trajectory(np.array([0.0, 0.5, 1.0]))
        assert np.array_equal(frames[:2], blast_off.poses[:2])
        assert np.allclose(frames[2], blast_off.poses[2], atol=1e-12)

    def test_bad_template(self, blast_off):
        with pytest.raises(GeneratorError, match="strictly increasing"):
            blast_off.__class__("x", (0.0, 0.5, 0.5, 1.0), np.zeros((4, 20, 3)))
        with pytest.raises(GeneratorError, match="expected"):
            blast_off.with_poses(np.zeros((2, 20, 3)))


class TestGenerateSample:
    def test_identity_profile_reproduces_the_template(self, blast_off):
        sample = generate_sample(blast_off, SubjectProfile(subject_id=2), (), n_frames=50)
        assert sample.label is Label.GOOD and sample.subject_id == 2
        assert np.abs(sample.frames - blast_off.trajectory(np.linspace(0.0, 1.0, 50))).max() < 1e-12

    def test_profile_scales_and_offsets(self, blast_off):
        base = generate_sample(blast_off, SubjectProfile(subject_id=1), (), n_frames=20).frames
        moved = generate_sample(blast_off, SubjectProfile(1, height_scale=1.2, camera_offset=(0.5, -1.0, 2.0)),
                                (), n_frames=20).frames
        assert np.allclose(moved, 1.2 * base + np.array([0.5, -1.0, 2.0]))

    def test_restricted_extension_keeps_segment_lengths(self, blast_off):
        clean, restricted = _clean_and_restricted(blast_off)
        def length(frames, a, b):
            return np.linalg.norm(frames[:, a] - frames[:, b], axis=1)

        for shoulder, elbow, wrist in ARMS:
            upper, fore = length(clean, elbow, shoulder), length(clean, wrist, elbow)
            assert np.allclose(length(restricted, elbow, shoulder), upper)
            assert np.allclose(length(restricted, wrist, elbow), fore)
            # keyframes hold the anatomical segment lengths
            assert upper[0] == pytest.approx(UPPER_ARM) and fore[-1] == pytest.approx(FOREARM)

            reach = length(clean, wrist, shoulder)
            reachable = 0.6 * reach > np.abs(upper - fore) + 1e-6
            assert reachable.mean() > 0.9
            assert np.allclose(length(restricted, wrist, shoulder)[reachable], 0.6 * reach[reachable])

    def test_restricted_arms_end_lower(self, blast_off):
        clean, restricted = _clean_and_restricted(blast_off)
        late = slice(60, 80)
        for _, _, wrist in ARMS:
            rising = np.diff(clean[:, wrist, 1])[59:] > 0
            assert rising.any()
            assert (restricted[late, wrist, 1] < clean[late, wrist, 1]).all()

    def test_restricted_elbow_never_straightens(self, blast_off):
        clean, restricted = _clean_and_restricted(blast_off)
        for shoulder, elbow, wrist in ARMS:
            clean_max = max(angle_between(f[shoulder], f[elbow], f[wrist]) for f in clean)
            restricted_max = max(angle_between(f[shoulder], f[elbow], f[wrist]) for f in restricted)
            assert restricted_max < clean_max
            assert clean_max == pytest.approx(np.pi, abs=1e-6)

    def test_one_arm_only(self, blast_off):
        profile = SubjectProfile(subject_id=1)
        clean = generate_sample(blast_off, profile, (), n_frames=30).frames
        left = generate_sample(blast_off, profile, (RestrictedExtension("arm-left", 0.5),), n_frames=30).frames
        assert np.array_equal(left[:, JointId.WRIST_RIGHT], clean[:, JointId.WRIST_RIGHT])
        assert not np.allclose(left[:, JointId.WRIST_LEFT], clean[:, JointId.WRIST_LEFT])

    def test_incomplete_final_phase(self, blast_off):
        profile = SubjectProfile(subject_id=1)
        clean = generate_sample(blast_off, profile, (), n_frames=41).frames
        short = generate_sample(blast_off, profile, (IncompletePhase(2, 0.5),), n_frames=41).frames
        assert np.array_equal(short[:21], clean[:21])
        assert short[-1, JointId.WRIST_LEFT, 1] < clean[-1, JointId.WRIST_LEFT, 1]
        assert short[-1, JointId.HEAD, 1] < clean[-1, JointId.HEAD, 1]

    def test_tempo_jitter_keeps_the_endpoints(self, blast_off):
        profile = SubjectProfile(subject_id=1)
        clean = generate_sample(blast_off, profile, (), n_frames=40).frames
        warped = generate_sample(blast_off, profile, (TempoJitter(0.15),), n_frames=40)
        assert warped.label is Label.BAD
        assert np.array_equal(warped.frames[0], clean[0])
        assert np.allclose(warped.frames[-1], clean[-1])
        assert not np.allclose(warped.frames[10:30], clean[10:30])

    def test_warp_is_monotone(self):
        t = np.linspace(0.0, 1.0, 101)
        w = TempoJitter(0.9).warp(t)
        assert w[0] == 0.0 and w[-1] == 1.0
        assert np.all(np.diff(w) > 0)

    def test_seeded_noise(self, blast_off):
        profile = SubjectProfile(subject_id=1, noise_sd=0.01, seed=3)
        a = generate_sample(blast_off, profile, (), n_frames=30)
        b = generate_sample(blast_off, profile, (), n_frames=30)
        c = generate_sample(blast_off, profile, (), n_frames=30, seed=4)
        assert np.array_equal(a.frames, b.frames)
        assert not np.array_equal(a.frames, c.frames)

    @pytest.mark.parametrize("make", [
        lambda: RestrictedExtension(Limb.BOTH, 1.0),
        lambda: RestrictedExtension(Limb.BOTH, 0.0),
        lambda: IncompletePhase(0, 0.5),
        lambda: IncompletePhase(1, 1.5),
        lambda: TempoJitter(1.0),
        lambda: SubjectProfile(1, height_scale=0.0),
        lambda: SubjectProfile(1, height_scale=0.69),
        lambda: SubjectProfile(1, height_scale=1.5),
        lambda: SubjectProfile(1, noise_sd=-0.1),
    ])
    def test_invalid_error_specs(self, make):
        with pytest.raises(GeneratorError):
            make()

    @pytest.mark.parametrize("scale", [0.7, 1.4])
    def test_height_scale_range_is_inclusive(self, blast_off, scale):
        sample = generate_sample(blast_off, SubjectProfile(1, height_scale=scale), (), n_frames=10)
        assert sample.n_frames == 10

    def test_phase_out_of_range(self, blast_off):
        with pytest.raises(GeneratorError, match="out of range"):
            generate_sample(blast_off, SubjectProfile(1), (IncompletePhase(3, 0.5),))

    def test_too_few_frames(self, blast_off):
        with pytest.raises(GeneratorError, match="n_frames"):
            generate_sample(blast_off, SubjectProfile(1), (), n_frames=1)


class TestGenerateDataset:
    def test_default_dataset_shape(self, blast_off_dataset):
        assert len(blast_off_dataset) == 125
        assert int(np.sum(blast_off_dataset.labels > 0)) == 63
        assert all(FRAME_RANGE[0] <= s.n_frames <= FRAME_RANGE[1] for s in blast_off_dataset)
        assert not blast_off_dataset.preprocessed
        assert blast_off_dataset.provenance.startswith("synthetic:Blast-Off")

    def test_goods_come_first_per_subject(self, blast_off):
        plans = plan_dataset(blast_off, 2, (2, 3), (3, 1), base_seed=1)
        assert [(p.subject_id, p.label) for p in plans] == (
            [(1, Label.GOOD)] * 2 + [(1, Label.BAD)] * 3 + [(2, Label.GOOD)] * 3 + [(2, Label.BAD)]
        )
        assert all((not p.errors) == (p.label is Label.GOOD) for p in plans)

    def test_same_seed_same_dataset(self, blast_off):
        kwargs = dict(n_subjects=2, pos_per_subject=(2, 2), neg_per_subject=(2, 2))
        a = generate_dataset(blast_off, base_seed=5, **kwargs)
        b = generate_dataset(blast_off, base_seed=5, **kwargs)
        c = generate_dataset(blast_off, base_seed=6, **kwargs)
        assert a.same_as(b)
        assert not a.same_as(c)

    @pytest.mark.parametrize("n_subjects, pos, neg, message", [
        (0, (), (), "n_subjects"),
        (2, (1,), (1, 1), "need 2"),
        (1, (0,), (1,), ">= 1"),
    ])
    def test_invalid_plans(self, blast_off, n_subjects, pos, neg, message):
        with pytest.raises(GeneratorError, match=message):
            plan_dataset(blast_off, n_subjects, pos, neg, base_seed=0)
