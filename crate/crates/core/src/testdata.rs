//! Sample data shared by unit tests.

use alloc::vec;

use crate::dataset::GeneralizedDataset;
use crate::model::IfsModel;
use crate::params::IfsParameters;

pub fn table1() -> GeneralizedDataset {
    GeneralizedDataset::new(
        vec![0.0, 1.0, 2.0],
        vec![0.0, 1.0, 2.0],
        vec![0.3, 0.5, 0.6, 0.7, 0.4, 0.6, 0.8, 0.5, 0.6],
        vec![0.3, 0.4, 0.5, 0.7, 0.8, 0.5, 0.6, 0.8, 0.9],
    )
    .unwrap()
}

pub fn table1_params() -> IfsParameters {
    IfsParameters::uniform(0.7, 0.4, 0.5, 2, 2).unwrap()
}

pub fn table1_model() -> IfsModel {
    IfsModel::build(table1(), table1_params()).unwrap()
}

/// Axis perturbation (a).
pub fn case_ia() -> GeneralizedDataset {
    table1().with_axes(vec![0.001, 1.0, 1.999], vec![0.001, 1.0, 1.999]).unwrap()
}

pub fn case_ib() -> GeneralizedDataset {
    table1().with_axes(vec![0.1, 1.0, 1.9], vec![0.1, 1.0, 1.9]).unwrap()
}

pub fn case_iia() -> GeneralizedDataset {
    table1().with_z(vec![0.301, 0.501, 0.601, 0.699, 0.401, 0.599, 0.801, 0.501, 0.601]).unwrap()
}

pub fn case_iib() -> GeneralizedDataset {
    table1().with_z(vec![0.4, 0.4, 0.7, 0.6, 0.3, 0.7, 0.9, 0.4, 0.5]).unwrap()
}

pub fn case_iiia() -> GeneralizedDataset {
    table1().with_t(vec![0.299, 0.401, 0.499, 0.701, 0.801, 0.501, 0.601, 0.801, 0.9]).unwrap()
}

pub fn case_iiib() -> GeneralizedDataset {
    table1().with_t(vec![0.4, 0.5, 0.4, 0.6, 0.9, 0.4, 0.5, 0.9, 0.8]).unwrap()
}

/// Axes from (a) or (b) of the first case combined with the matching z and t
/// perturbations.
pub fn combined(b: bool) -> GeneralizedDataset {
    let (axes, z, t) = if b { (case_ib(), case_iib(), case_iiib()) } else { (case_ia(), case_iia(), case_iiia()) };
    GeneralizedDataset::new(
        axes.x().to_vec(),
        axes.y().to_vec(),
        z.z().as_slice().to_vec(),
        t.t().as_slice().to_vec(),
    )
    .unwrap()
}
