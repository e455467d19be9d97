"""Rejection sampling: membership, determinism, presets, budget."""

import math

import numpy as np
import pytest

from eqlbounds import (
    BallCap,
    Dataset,
    Direction,
    LinearCut,
    PAPER_PRESETS,
    RegionSpec,
    RejectionBudgetExceededError,
    generate,
    load_region_spec,
    paper_dataset,
    save_region_spec,
)


def square_spec():
    return RegionSpec(
        box=[[-5.0, 25.0], [-5.0, 25.0]],
        linear_cuts=(LinearCut([1.0, 2.0], 4.0, Direction.LOWER),),
    )


class TestGenerate:
    def test_zero_points(self):
        ds = generate(square_spec(), 0)
        assert ds.n_points == 0
        assert ds.n_features == 2

    def test_negative_count_rejected(self):
        with pytest.raises(ValueError):
            generate(square_spec(), -1)

    def test_square_membership(self):
        ds = generate(square_spec(), 600, seed=3)
        pts = ds.points
        assert np.all(pts >= -5.0) and np.all(pts <= 25.0)
        assert np.all(pts[:, 0] + 2.0 * pts[:, 1] > 4.0)
        assert np.array_equal(ds.targets, np.zeros(600))

    def test_deterministic(self):
        a = generate(square_spec(), 50, seed=42)
        b = generate(square_spec(), 50, seed=42)
        assert np.array_equal(a.points, b.points)

    def test_seeds_differ(self):
        a = generate(square_spec(), 50, seed=0)
        b = generate(square_spec(), 50, seed=1)
        assert not np.array_equal(a.points, b.points)

    def test_infeasible_region_exhausts_budget(self):
        spec = RegionSpec(
            box=[[0.0, 1.0]],
            linear_cuts=(LinearCut([1.0], 5.0, Direction.LOWER),),
        )
        with pytest.raises(RejectionBudgetExceededError):
            generate(spec, 1, seed=0)

    def test_upper_cut_direction(self):
        spec = RegionSpec(
            box=[[-1.0, 1.0], [-1.0, 1.0]],
            linear_cuts=(LinearCut([1.0, 1.0], 0.5, Direction.UPPER),),
        )
        pts = generate(spec, 100, seed=2).points
        assert np.all(pts[:, 0] + pts[:, 1] < 0.5)

    def test_ball_cap_membership(self):
        spec = RegionSpec(
            box=[[-2.0, 2.0], [-2.0, 2.0]],
            quadratic_cap=BallCap([0.5, 0.0], 1.0),
        )
        pts = generate(spec, 200, seed=1).points
        assert np.all((pts[:, 0] - 0.5) ** 2 + pts[:, 1] ** 2 <= 1.0)


class TestPresets:
    def test_catalog(self):
        assert set(PAPER_PRESETS) == {"square-high", "circle", "square-low", "cube"}

    def test_square_high_shape_and_membership(self):
        ds = paper_dataset("square-high", seed=0)
        assert (ds.n_points, ds.n_features) == (600, 2)
        pts = ds.points
        assert np.all(pts >= -5.0) and np.all(pts <= 25.0)
        assert np.all(pts[:, 0] + 2.0 * pts[:, 1] > 4.0)

    def test_circle_shape_and_membership(self):
        ds = paper_dataset("circle", seed=0)
        assert (ds.n_points, ds.n_features) == (250, 2)
        radii = np.sum(ds.points**2, axis=1)
        assert np.all(radii <= 200.0)

    def test_square_low_shape(self):
        ds = paper_dataset("square-low", seed=0)
        assert (ds.n_points, ds.n_features) == (100, 2)

    def test_cube_shape_and_membership(self):
        ds = paper_dataset("cube", seed=0)
        assert (ds.n_points, ds.n_features) == (2000, 3)
        pts = ds.points
        assert np.all(pts >= -5.0) and np.all(pts <= 25.0)
        assert np.all(pts[:, 0] + 2.0 * pts[:, 1] - 3.0 * pts[:, 2] > 4.0)

    def test_seed_contract(self):
        a = paper_dataset("circle", seed=0)
        b = paper_dataset("circle", seed=1)
        assert (a.n_points, a.n_features) == (b.n_points, b.n_features)
        assert not np.array_equal(a.points, b.points)
        assert np.all(np.sum(b.points**2, axis=1) <= 200.0)

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="square-high"):
            paper_dataset("triangle")


class TestRegionSpecValidation:
    def test_box_bounds_must_increase(self):
        with pytest.raises(ValueError):
            RegionSpec(box=[[1.0, 1.0]])
        with pytest.raises(ValueError):
            RegionSpec(box=[[2.0, -2.0]])

    def test_cut_dimension_must_match(self):
        with pytest.raises(ValueError):
            RegionSpec(
                box=[[0.0, 1.0]],
                linear_cuts=(LinearCut([1.0, 2.0], 0.0, Direction.LOWER),),
            )

    def test_cap_dimension_must_match(self):
        with pytest.raises(ValueError):
            RegionSpec(box=[[0.0, 1.0]], quadratic_cap=BallCap([0.0, 0.0], 1.0))

    def test_membership_mask_matches_contains(self):
        spec = RegionSpec(
            box=[[-2.0, 2.0], [-2.0, 2.0]],
            linear_cuts=(LinearCut([1.0, -1.0], 0.0, Direction.LOWER),),
            quadratic_cap=BallCap([0.0, 0.0], 1.8),
        )
        rng = np.random.default_rng(6)
        pts = rng.uniform(-2.5, 2.5, size=(200, 2))
        mask = spec.membership_mask(pts)
        assert list(mask) == [spec.contains(p) for p in pts]


class TestRegionSpecFiles:
    def test_round_trip(self, tmp_path):
        spec = RegionSpec(
            box=[[-5.0, 25.0], [-5.0, 25.0]],
            linear_cuts=(
                LinearCut([1.0, 2.0], 4.0, Direction.LOWER),
                LinearCut([0.0, 1.0], 20.0, Direction.UPPER),
            ),
            quadratic_cap=BallCap([10.0, 10.0], 18.0),
        )
        path = tmp_path / "region.json"
        save_region_spec(spec, path)
        loaded = load_region_spec(path)
        assert np.array_equal(loaded.box, spec.box)
        assert len(loaded.linear_cuts) == 2
        for got, want in zip(loaded.linear_cuts, spec.linear_cuts):
            assert np.array_equal(got.coeffs, want.coeffs)
            assert got.bound == want.bound
            assert got.direction is want.direction
        assert np.array_equal(loaded.quadratic_cap.center, spec.quadratic_cap.center)
        assert loaded.quadratic_cap.radius == spec.quadratic_cap.radius
        a = generate(spec, 40, seed=9)
        b = generate(loaded, 40, seed=9)
        assert np.array_equal(a.points, b.points)

    def test_round_trip_without_cap(self, tmp_path):
        path = tmp_path / "region.json"
        save_region_spec(square_spec(), path)
        loaded = load_region_spec(path)
        assert loaded.quadratic_cap is None
        assert len(loaded.linear_cuts) == 1

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(ValueError):
            load_region_spec(tmp_path / "absent.json")


class TestUniformity:
    def test_square_quadrants_match_area_shares(self):
        # Feasible region: [-5,25]^2 above the line x0 + 2*x1 = 4.  Split at
        # the box center (10, 10); quadrant areas by direct integration are
        # 138.75, 221, 225, 225 (total 809.75).
        areas = {"ll": 138.75, "lr": 221.0, "ul": 225.0, "ur": 225.0}
        total = sum(areas.values())

        # Independent check of those constants with a dense membership grid.
        grid = np.linspace(-5.0, 25.0, 1501)
        gx, gy = np.meshgrid(grid, grid, indexing="ij")
        inside = gx + 2.0 * gy > 4.0
        cell = (30.0 / 1500) ** 2
        est = float(inside.sum()) * cell
        assert est == pytest.approx(total, rel=0.01)

        ds = paper_dataset("square-high", seed=0)
        x, y = ds.points[:, 0], ds.points[:, 1]
        counts = {
            "ll": int(np.sum((x < 10) & (y < 10))),
            "lr": int(np.sum((x >= 10) & (y < 10))),
            "ul": int(np.sum((x < 10) & (y >= 10))),
            "ur": int(np.sum((x >= 10) & (y >= 10))),
        }
        n = ds.n_points
        for key, area in areas.items():
            p = area / total
            sigma = math.sqrt(n * p * (1 - p))
            assert abs(counts[key] - n * p) <= 4 * sigma, key

    def test_circle_quadrants_are_symmetric(self):
        ds = paper_dataset("circle", seed=0)
        x, y = ds.points[:, 0], ds.points[:, 1]
        n = ds.n_points
        sigma = math.sqrt(n * 0.25 * 0.75)
        for quadrant in (
            (x >= 0) & (y >= 0),
            (x < 0) & (y >= 0),
            (x >= 0) & (y < 0),
            (x < 0) & (y < 0),
        ):
            assert abs(int(quadrant.sum()) - n * 0.25) <= 4 * sigma
