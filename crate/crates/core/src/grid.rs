//! Uniform grids, cell-average fields and ghost-cell boundary conditions.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{HyperbolicModel, State};

/// Uniform partition of `[x_left, x_right]` into `n_cells` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub x_left: f64,
    pub x_right: f64,
    pub n_cells: usize,
    pub dx: f64,
    /// `x_{j+1/2} = x_left + j dx` for `j = 0..=n_cells`.
    pub interfaces: Vec<f64>,
    pub centers: Vec<f64>,
}

pub fn make_grid(x_left: f64, x_right: f64, n_cells: usize) -> Result<Grid> {
    if n_cells == 0 {
        return Err(Error::InvalidGrid("n_cells must be at least 1".into()));
    }
    if !(x_left.is_finite() && x_right.is_finite()) || x_left >= x_right {
        return Err(Error::InvalidGrid(format!("degenerate domain [{x_left}, {x_right}]")));
    }
    let dx = (x_right - x_left) / n_cells as f64;
    let interfaces: Vec<f64> = (0..=n_cells).map(|j| x_left + j as f64 * dx).collect();
    let centers = interfaces.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    Ok(Grid {
        x_left,
        x_right,
        n_cells,
        dx,
        interfaces,
        centers,
    })
}

impl Grid {
    /// Index of the cell whose center is nearest to `x`, ties to the lower
    /// index. Points outside the domain clamp to the end cells.
    pub fn nearest_cell(&self, x: f64) -> usize {
        let s = (x - self.x_left) / self.dx - 0.5;
        let idx = (s - 0.5).ceil();
        if idx <= 0.0 {
            0
        } else {
            (idx as usize).min(self.n_cells - 1)
        }
    }
}

/// Cell averages of an `M`-component system at one time instant.
#[derive(Debug, Clone, PartialEq)]
pub struct StateField<const M: usize> {
    pub grid: Grid,
    pub data: Vec<State<M>>,
    pub time: f64,
}

impl<const M: usize> StateField<M> {
    pub fn new(grid: Grid, data: Vec<State<M>>, time: f64) -> Result<Self> {
        if data.len() != grid.n_cells {
            return Err(Error::InvalidArgument(format!(
                "field has {} rows for {} cells",
                data.len(),
                grid.n_cells
            )));
        }
        if let Some(cell) = data.iter().position(|u| u.iter().any(|v| !v.is_finite())) {
            return Err(Error::NonFinite { cell });
        }
        Ok(Self { grid, data, time })
    }

    /// `Σ_j U_j Δx`.
    pub fn total(&self) -> State<M> {
        self.data.iter().fold(State::<M>::zeros(), |acc, u| acc + u) * self.grid.dx
    }

    /// Values of component `c` across the grid.
    pub fn component(&self, c: usize) -> Vec<f64> {
        self.data.iter().map(|u| u[c]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .flat_map(|u| u.iter())
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }
}

/// Samples `init` at cell centers.
pub fn init_field<const M: usize, Mdl, F>(model: &Mdl, grid: &Grid, init: F) -> Result<StateField<M>>
where
    Mdl: HyperbolicModel<M> + ?Sized,
    F: Fn(f64) -> State<M>,
{
    let mut data = Vec::with_capacity(grid.n_cells);
    for (cell, &x) in grid.centers.iter().enumerate() {
        let u = init(x);
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { cell });
        }
        model.check_state(&u)?;
        data.push(u);
    }
    StateField::new(grid.clone(), data, 0.0)
}

type BoundaryFn<const M: usize> = Arc<dyn Fn(f64) -> State<M> + Send + Sync>;

/// Boundary treatment at one end of the domain.
#[derive(Clone)]
pub enum BoundaryCondition<const M: usize> {
    /// Ghost cells hold `U_l(t)`.
    Dirichlet(BoundaryFn<M>),
    /// Ghost cells copy the adjacent interior cell.
    Open,
}

impl<const M: usize> BoundaryCondition<M> {
    pub fn constant(value: State<M>) -> Self {
        Self::Dirichlet(Arc::new(move |_| value))
    }

    pub fn time_dependent(f: impl Fn(f64) -> State<M> + Send + Sync + 'static) -> Self {
        Self::Dirichlet(Arc::new(f))
    }

    fn ghost(&self, adjacent: &State<M>, t: f64) -> State<M> {
        match self {
            Self::Dirichlet(f) => f(t),
            Self::Open => *adjacent,
        }
    }
}

impl<const M: usize> fmt::Debug for BoundaryCondition<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Dirichlet(g) => write!(f, "Dirichlet({:?} at t=0)", g(0.0).as_slice()),
            Self::Open => write!(f, "Open"),
        }
    }
}

/// Field extended by one ghost cell on each side (`N + 2` rows).
pub fn apply_boundary<const M: usize>(
    field: &StateField<M>,
    left: &BoundaryCondition<M>,
    right: &BoundaryCondition<M>,
    t: f64,
) -> Vec<State<M>> {
    extend_with_ghosts(&field.data, left, right, t, 1)
}

/// Interior data with `n_ghost` ghost cells on each side.
pub fn extend_with_ghosts<const M: usize>(
    data: &[State<M>],
    left: &BoundaryCondition<M>,
    right: &BoundaryCondition<M>,
    t: f64,
    n_ghost: usize,
) -> Vec<State<M>> {
    let first = data[0];
    let last = data[data.len() - 1];
    let left_ghost = left.ghost(&first, t);
    let right_ghost = right.ghost(&last, t);

    let mut ext = Vec::with_capacity(data.len() + 2 * n_ghost);
    ext.extend(std::iter::repeat_n(left_ghost, n_ghost));
    ext.extend_from_slice(data);
    ext.extend(std::iter::repeat_n(right_ghost, n_ghost));
    ext
}

/// `max_j |λ|_max(U_j)` over the interior cells.
pub fn max_wave_speed<const M: usize, Mdl>(model: &Mdl, field: &StateField<M>) -> Result<f64>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    max_wave_speed_of(model, &field.data)
}

pub(crate) fn max_wave_speed_of<const M: usize, Mdl>(model: &Mdl, data: &[State<M>]) -> Result<f64>
where
    Mdl: HyperbolicModel<M> + ?Sized,
{
    data.iter()
        .try_fold(0.0_f64, |acc, u| Ok(acc.max(model.max_abs_eigenvalue(u)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::LinearModel;
    use crate::model::Matrix;
    use crate::swlin::{SwLinParams, SwViscosity};

    fn assert_slice_close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-14, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn grid_of_four_cells() {
        let g = make_grid(-1.0, 1.0, 4).unwrap();
        assert_eq!(g.dx, 0.5);
        assert_slice_close(&g.interfaces, &[-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_slice_close(&g.centers, &[-0.75, -0.25, 0.25, 0.75]);
    }

    #[test]
    fn thousand_cell_grid() {
        let g = make_grid(-1.0, 1.0, 1000).unwrap();
        assert!((g.dx - 0.002).abs() < 1e-16);
        assert_eq!(g.interfaces.len(), 1001);
        assert_eq!(g.interfaces[1000], 1.0);
    }

    #[test]
    fn single_cell_grid() {
        let g = make_grid(0.0, 1.0, 1).unwrap();
        assert_eq!(g.centers, vec![0.5]);
    }

    #[test]
    fn degenerate_grids_rejected() {
        assert!(make_grid(0.0, 1.0, 0).is_err());
        assert!(make_grid(1.0, 1.0, 4).is_err());
        assert!(make_grid(2.0, 1.0, 4).is_err());
        assert!(make_grid(f64::NAN, 1.0, 4).is_err());
    }

    #[test]
    fn nearest_cell_sampling() {
        let g = make_grid(-1.0, 1.0, 8).unwrap();
        assert_eq!(g.nearest_cell(-1.0), 0);
        assert_eq!(g.nearest_cell(-0.875), 0);
        // interface between cells 0 and 1: ties go down
        assert_eq!(g.nearest_cell(-0.75), 0);
        assert_eq!(g.nearest_cell(-0.74), 1);
        assert_eq!(g.nearest_cell(5.0), 7);
    }

    #[test]
    fn sw_initial_data_on_four_cells() {
        let model = SwLinParams::reference().model(SwViscosity::Eddy).unwrap();
        let g = make_grid(-1.0, 1.0, 4).unwrap();
        let f = init_field(&model, &g, |x| {
            if x < 0.0 {
                State::<2>::new(3.0, 1.0)
            } else {
                State::<2>::new(1.0, 1.0)
            }
        })
        .unwrap();
        let rows: Vec<_> = f.data.iter().map(|u| (u[0], u[1])).collect();
        assert_eq!(rows, vec![(3.0, 1.0), (3.0, 1.0), (1.0, 1.0), (1.0, 1.0)]);
        assert_eq!(f.time, 0.0);
    }

    #[test]
    fn constant_init_and_nonfinite_rejection() {
        let model = SwLinParams::reference().model(SwViscosity::Laplacian).unwrap();
        let g = make_grid(0.0, 1.0, 5).unwrap();
        let f = init_field(&model, &g, |_| State::<2>::new(0.5, -2.0)).unwrap();
        assert!(f.data.iter().all(|u| *u == State::<2>::new(0.5, -2.0)));

        let err = init_field(&model, &g, |x| {
            State::<2>::new(if x > 0.6 { f64::NAN } else { 0.0 }, 0.0)
        });
        assert_eq!(err.unwrap_err(), Error::NonFinite { cell: 3 });
    }

    #[test]
    fn ghost_cells() {
        let g = make_grid(-1.0, 1.0, 3).unwrap();
        let data = vec![
            State::<2>::new(3.0, 1.0),
            State::<2>::new(5.0, 0.0),
            State::<2>::new(1.0, 1.0),
        ];
        let f = StateField::new(g, data.clone(), 0.0).unwrap();
        let left = BoundaryCondition::constant(State::<2>::new(2.0, 1.0));
        let ext = apply_boundary(&f, &left, &BoundaryCondition::Open, 0.0);
        assert_eq!(ext.len(), 5);
        assert_eq!(ext[0], State::<2>::new(2.0, 1.0));
        assert_eq!(ext[4], State::<2>::new(1.0, 1.0));
        assert_eq!(&ext[1..4], &data[..]);

        let moving = BoundaryCondition::time_dependent(|t| State::<2>::new(t, 0.0));
        let ext = apply_boundary(&f, &moving, &BoundaryCondition::Open, 0.5);
        assert_eq!(ext[0], State::<2>::new(0.5, 0.0));
    }

    #[test]
    fn wave_speed_of_linear_models() {
        let model = SwLinParams::reference().model(SwViscosity::Eddy).unwrap();
        let g = make_grid(-1.0, 1.0, 10).unwrap();
        let f = init_field(&model, &g, |x| State::<2>::new(x, 3.0 * x)).unwrap();
        let c = max_wave_speed(&model, &f).unwrap();
        assert!((c - (1.0 + 2f64.sqrt())).abs() < 1e-12);

        let diag =
            LinearModel::with_canonical_symmetrizer(Matrix::<2>::new(-2.0, 0.0, 0.0, 1.0), Matrix::<2>::identity())
                .unwrap();
        let zero = init_field(&diag, &g, |_| State::<2>::zeros()).unwrap();
        assert!((max_wave_speed(&diag, &zero).unwrap() - 2.0).abs() < 1e-14);
    }
}
