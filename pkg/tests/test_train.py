import io

import numpy as np
import pytest

from scanmend import (
    Activation,
    Arch,
    ConvLayer,
    DivergenceError,
    PhantomKind,
    PhantomSpec,
    ShapeError,
    SrModel,
    TrainConfig,
    XorShift64,
    extract_patches,
    generate,
    make_srcnn,
    make_training_pair,
    sgdm_step,
    train,
)
from scanmend.neural.train import TrainState


def one_param_state(w0):
    w = np.array([[[[w0]]]], dtype=np.float64)
    layer = ConvLayer(1, 1, 1, w, np.zeros(1), Activation.LINEAR)
    model = SrModel(Arch.SRCNN, [layer], residual=False)
    return TrainState(
        model=model,
        velocities=[(np.zeros_like(w), np.zeros(1))],
        epoch=0,
        rng=XorShift64(0),
    )


class TestConfig:
    def test_srcnn_preset_values(self):
        cfg = TrainConfig.srcnn_preset()
        assert cfg.epochs == 200 and cfg.patch_size == 33
        assert cfg.base_lr == 1e-4
        assert cfg.per_layer_lr_scale == (1.0, 1.0, 0.1)
        assert cfg.lr_decay_factor == 1.0 and cfg.grad_clip is None

    def test_vdsr_preset_values(self):
        cfg = TrainConfig.vdsr_preset()
        assert cfg.epochs == 100 and cfg.patch_size == 41
        assert cfg.base_lr == 0.1
        assert cfg.lr_decay_factor == 0.1 and cfg.lr_decay_every == 10
        assert cfg.grad_clip == 0.4
        assert len(cfg.per_layer_lr_scale) == 20

    @pytest.mark.parametrize("kwargs", [
        {"epochs": 0, "patch_size": 9},
        {"epochs": 1, "patch_size": 0},
        {"epochs": 1, "patch_size": 9, "momentum": 1.0},
        {"epochs": 1, "patch_size": 9, "base_lr": 0.0},
        {"epochs": 1, "patch_size": 9, "lr_decay_factor": 0.0},
        {"epochs": 1, "patch_size": 9, "grad_clip": -1.0},
    ])
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            TrainConfig(**kwargs)


class TestSgdmStep:
    def test_two_steps_hand_computed(self):
        state = one_param_state(1.0)
        g = np.ones((1, 1, 1, 1))
        gb = np.zeros(1)
        sgdm_step(state, [(g, gb)], [0.1], momentum=0.9)
        v1 = -0.1 * 1.0
        w1 = 1.0 + v1
        assert state.model.layers[0].weights[0, 0, 0, 0] == w1
        sgdm_step(state, [(g, gb)], [0.1], momentum=0.9)
        v2 = 0.9 * v1 - 0.1 * 1.0
        assert state.model.layers[0].weights[0, 0, 0, 0] == w1 + v2

    def test_zero_momentum_is_plain_sgd(self):
        state = one_param_state(2.0)
        g = np.full((1, 1, 1, 1), 3.0)
        sgdm_step(state, [(g, np.zeros(1))], [0.5], momentum=0.0)
        assert state.model.layers[0].weights[0, 0, 0, 0] == 2.0 - 0.5 * 3.0

    def test_grad_clip_bounds_update(self):
        state = one_param_state(0.0)
        g = np.full((1, 1, 1, 1), 100.0)
        sgdm_step(state, [(g, np.zeros(1))], [1.0], momentum=0.0, grad_clip=0.4)
        assert state.model.layers[0].weights[0, 0, 0, 0] == -0.4

    def test_bias_updated_too(self):
        state = one_param_state(0.0)
        g = np.zeros((1, 1, 1, 1))
        gb = np.full(1, 2.0)
        sgdm_step(state, [(g, gb)], [0.25], momentum=0.0)
        assert state.model.layers[0].biases[0] == -0.5

    def test_shape_mismatch_rejected(self):
        state = one_param_state(0.0)
        bad = np.zeros((2, 1, 1, 1))
        with pytest.raises(ShapeError):
            sgdm_step(state, [(bad, np.zeros(1))], [0.1], momentum=0.9)

    def test_length_mismatch_rejected(self):
        state = one_param_state(0.0)
        with pytest.raises(ShapeError):
            sgdm_step(state, [], [0.1], momentum=0.9)


class TestExtractPatches:
    def phantom_pair(self, seed=0):
        hr = generate(PhantomSpec(width=64, height=64, seed=seed,
                                  kind=PhantomKind.MIXED, noise_sigma=4.0))
        return make_training_pair(hr, 2)

    def test_grid_walk_count(self):
        lr, hr = self.phantom_pair()
        pairs = extract_patches(lr, hr, patch_size=17, stride=16)
        assert len(pairs) == 3 * 3   # offsets 0, 16, 32 in each axis
        x, t = pairs[0]
        assert x.shape == (1, 17, 17) and t.shape == (1, 17, 17)

    def test_values_normalized(self):
        lr, hr = self.phantom_pair()
        x, t = extract_patches(lr, hr, patch_size=9, stride=50)[0]
        assert x.max() <= 1.0 and x.min() >= 0.0
        assert np.array_equal(x[0], lr[:9, :9].astype(np.float64) / 255.0)
        assert np.array_equal(t[0], hr[:9, :9].astype(np.float64) / 255.0)

    def test_residual_target_algebra(self):
        lr, hr = self.phantom_pair()
        x, t = extract_patches(lr, hr, patch_size=9, stride=50, residual=True)[0]
        want = (hr[:9, :9].astype(np.float64) - lr[:9, :9].astype(np.float64)) / 255.0
        assert np.array_equal(t[0], want)

    def test_random_mode_in_bounds_and_deterministic(self):
        lr, hr = self.phantom_pair()
        a = extract_patches(lr, hr, 21, rng=XorShift64(5), count=8)
        b = extract_patches(lr, hr, 21, rng=XorShift64(5), count=8)
        assert len(a) == 8
        for (xa, ta), (xb, tb) in zip(a, b):
            assert np.array_equal(xa, xb) and np.array_equal(ta, tb)
            assert xa.shape == (1, 21, 21)

    def test_patch_larger_than_image(self):
        lr, hr = self.phantom_pair()
        with pytest.raises(ValueError):
            extract_patches(lr, hr, patch_size=65)

    def test_dims_must_match(self):
        lr, hr = self.phantom_pair()
        with pytest.raises(ShapeError):
            extract_patches(lr[:32], hr, patch_size=9)


class TestMakeTrainingPair:
    def test_dims_preserved(self):
        hr = generate(PhantomSpec(width=50, height=62, seed=1))
        lr_up, hr_out = make_training_pair(hr, 2)
        assert lr_up.shape == hr.shape
        assert hr_out is hr

    def test_upscaled_is_lossy(self):
        hr = generate(PhantomSpec(width=64, height=64, seed=2,
                                  kind=PhantomKind.BARS))
        lr_up, _ = make_training_pair(hr, 2)
        assert not np.array_equal(lr_up, hr)


def tiny_corpus(n=3):
    out = []
    kinds = [PhantomKind.ELLIPSES, PhantomKind.BARS, PhantomKind.MIXED]
    for i in range(n):
        hr = generate(PhantomSpec(width=48, height=48, seed=i,
                                  kind=kinds[i % 3], noise_sigma=3.0))
        out.append(make_training_pair(hr, 2))
    return out


def tiny_cfg(**kw):
    base = dict(epochs=3, patch_size=17, batch_size=2, steps_per_epoch=2,
                base_lr=1e-3, seed=1)
    base.update(kw)
    return TrainConfig(**base)


class TestTrain:
    def test_records_history_and_progress(self):
        log = io.StringIO()
        state = train(make_srcnn(XorShift64(1)), tiny_corpus(), tiny_cfg(),
                      progress=log)
        assert len(state.loss_history) == 3
        assert state.epoch == 3
        lines = log.getvalue().splitlines()
        assert len(lines) == 3
        assert lines[0].startswith("epoch=0 lr=0.001 loss=")

    def test_same_seed_bitwise_identical(self):
        a = train(make_srcnn(XorShift64(1)), tiny_corpus(), tiny_cfg())
        b = train(make_srcnn(XorShift64(1)), tiny_corpus(), tiny_cfg())
        assert a.loss_history == b.loss_history
        for la, lb in zip(a.model.layers, b.model.layers):
            assert np.array_equal(la.weights, lb.weights)

    def test_updates_parameters(self):
        model = make_srcnn(XorShift64(1))
        before = [l.weights.copy() for l in model.layers]
        train(model, tiny_corpus(), tiny_cfg(epochs=1))
        assert any(
            not np.array_equal(b, l.weights)
            for b, l in zip(before, model.layers)
        )

    def test_lr_decay_schedule_in_progress_lines(self):
        log = io.StringIO()
        cfg = tiny_cfg(epochs=4, lr_decay_factor=0.5, lr_decay_every=2)
        train(make_srcnn(XorShift64(1)), tiny_corpus(), cfg, progress=log)
        lrs = [line.split()[1] for line in log.getvalue().splitlines()]
        assert lrs == ["lr=0.001", "lr=0.001", "lr=0.0005", "lr=0.0005"]

    def test_divergence_raises(self):
        cfg = tiny_cfg(base_lr=1e200, epochs=10)
        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(DivergenceError):
                train(make_srcnn(XorShift64(1)), tiny_corpus(), cfg)

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            train(make_srcnn(XorShift64(1)), [], tiny_cfg())

    def test_scale_length_mismatch(self):
        cfg = tiny_cfg(per_layer_lr_scale=(1.0, 1.0))
        with pytest.raises(ValueError):
            train(make_srcnn(XorShift64(1)), tiny_corpus(), cfg)

    def test_patch_must_fit_corpus(self):
        cfg = tiny_cfg(patch_size=49)
        with pytest.raises(ValueError):
            train(make_srcnn(XorShift64(1)), tiny_corpus(), cfg)
