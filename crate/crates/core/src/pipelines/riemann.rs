//! Classifiers on SPD covariances: minimum distance to mean, its
//! geodesic-filtered variant, and tangent-space heads.

use nalgebra::{DMatrix, DVector};

use super::linear::{shrunk_scatter, HeadKind, LinearHead, Shrinkage};
use super::spatial::generalized_eig;
use super::{PipelineError, Result};
use crate::spd::{airm_distance, frechet_mean, FrechetOptions, SpdError, SpdMatrix, TangentSpace, TangentVector};

/// Residual below which a Karcher flow that ran out of iterations is taken
/// as converged; ill-conditioned sets stall at round-off just above `tol`.
const MEAN_ACCEPT: f64 = 1e-6;

/// Riemannian mean, tolerating stalls at the round-off floor.
pub fn riemannian_mean(set: &[SpdMatrix]) -> Result<SpdMatrix> {
    match frechet_mean(set, FrechetOptions::default()) {
        Err(SpdError::NonConvergence { last, residual, .. }) if residual < MEAN_ACCEPT => Ok(*last),
        other => Ok(other?),
    }
}

/// Row-wise softmax of `-distances` (temperature 1).
pub(crate) fn softmax_rows(scores: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = scores.clone();
    for mut row in out.row_iter_mut() {
        let max = row.max();
        row.apply(|v| *v = (*v - max).exp());
        let sum = row.sum();
        row /= sum;
    }
    out
}

fn group(covs: &[SpdMatrix], labels: &[usize], n_classes: usize) -> Result<Vec<Vec<SpdMatrix>>> {
    if covs.len() != labels.len() {
        return Err(PipelineError::DimensionMismatch {
            expected: covs.len(),
            found: labels.len(),
        });
    }
    let mut groups = vec![Vec::new(); n_classes];
    for (c, &l) in covs.iter().zip(labels) {
        groups
            .get_mut(l)
            .ok_or_else(|| PipelineError::InvalidInput(format!("label {l} out of range")))?
            .push(c.clone());
    }
    if let Some(k) = groups.iter().position(Vec::is_empty) {
        return Err(PipelineError::DegenerateLabels(format!("class {k} has no trials")));
    }
    Ok(groups)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mdm {
    pub means: Vec<SpdMatrix>,
}

impl Mdm {
    pub fn fit(covs: &[SpdMatrix], labels: &[usize], n_classes: usize) -> Result<Self> {
        let means = group(covs, labels, n_classes)?
            .iter()
            .map(|g| riemannian_mean(g))
            .collect::<Result<_>>()?;
        Ok(Self { means })
    }

    pub fn distances(&self, c: &SpdMatrix) -> Result<Vec<f64>> {
        self.means
            .iter()
            .map(|m| airm_distance(m, c).map_err(PipelineError::from))
            .collect()
    }

    pub fn predict_proba(&self, covs: &[SpdMatrix]) -> Result<DMatrix<f64>> {
        let mut neg = DMatrix::zeros(covs.len(), self.means.len());
        for (i, c) in covs.iter().enumerate() {
            for (j, d) in self.distances(c)?.into_iter().enumerate() {
                neg[(i, j)] = -d;
            }
        }
        Ok(softmax_rows(&neg))
    }
}

fn tangent_matrix(ts: &TangentSpace, covs: &[SpdMatrix]) -> Result<DMatrix<f64>> {
    let vecs: Vec<TangentVector> = covs
        .iter()
        .map(|c| ts.vectorize(c).map_err(PipelineError::from))
        .collect::<Result<_>>()?;
    let d = vecs.first().map_or(0, |v| v.len());
    Ok(DMatrix::from_fn(vecs.len(), d, |i, j| vecs[i].values()[j]))
}

/// MDM after projecting tangent vectors onto the Fisher discriminant
/// subspace of dimension `classes − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FgMdm {
    pub ts: TangentSpace,
    pub projector: DMatrix<f64>,
    pub mdm: Mdm,
}

impl FgMdm {
    pub fn fit(covs: &[SpdMatrix], labels: &[usize], n_classes: usize) -> Result<Self> {
        group(covs, labels, n_classes)?;
        let reference = riemannian_mean(covs)?;
        let ts = TangentSpace::new(reference);
        let x = tangent_matrix(&ts, covs)?;
        let projector = fisher_projector(&x, labels, n_classes)?;
        let mut model = Self {
            ts,
            projector,
            mdm: Mdm { means: Vec::new() },
        };
        let filtered = model.filter_all(covs)?;
        model.mdm = Mdm::fit(&filtered, labels, n_classes)?;
        Ok(model)
    }

    pub fn filter(&self, c: &SpdMatrix) -> Result<SpdMatrix> {
        let v = self.ts.vectorize(c)?;
        let p = &self.projector * v.values();
        Ok(self.ts.unvectorize(&TangentVector::from_values(self.ts.dim(), p)?)?)
    }

    fn filter_all(&self, covs: &[SpdMatrix]) -> Result<Vec<SpdMatrix>> {
        covs.iter().map(|c| self.filter(c)).collect()
    }

    pub fn predict_proba(&self, covs: &[SpdMatrix]) -> Result<DMatrix<f64>> {
        self.mdm.predict_proba(&self.filter_all(covs)?)
    }
}

/// Orthogonal projector onto the span of the leading `classes − 1` Fisher
/// discriminant directions (shrunk within-class scatter).
pub fn fisher_projector(x: &DMatrix<f64>, labels: &[usize], n_classes: usize) -> Result<DMatrix<f64>> {
    let (n, d) = x.shape();
    let mut means = vec![DVector::<f64>::zeros(d); n_classes];
    let mut counts = vec![0usize; n_classes];
    for (row, &l) in x.row_iter().zip(labels) {
        means[l] += row.transpose();
        counts[l] += 1;
    }
    for (m, &c) in means.iter_mut().zip(&counts) {
        *m /= c as f64;
    }
    let grand = DVector::from_iterator(d, x.column_iter().map(|c| c.mean()));
    let xc = DMatrix::from_fn(n, d, |i, j| x[(i, j)] - means[labels[i]][j]);
    let sw = SpdMatrix::new(shrunk_scatter(&xc, Shrinkage::Auto, n as f64))?;
    let mut sb = DMatrix::zeros(d, d);
    for (m, &c) in means.iter().zip(&counts) {
        let diff = m - &grand;
        sb += &diff * diff.transpose() * (c as f64 / n as f64);
    }
    let k = (n_classes - 1).min(d);
    let (_, vecs) = generalized_eig(&sb, &sw)?;
    let v = vecs.columns(0, k).into_owned();
    let gram = v.transpose() * &v;
    let inv = gram.try_inverse().ok_or(PipelineError::SingularCovariance)?;
    Ok(&v * inv * v.transpose())
}

/// Tangent space at the training Fréchet mean plus a linear head.
#[derive(Debug, Clone, PartialEq)]
pub struct TsModel {
    pub ts: TangentSpace,
    pub head: LinearHead,
}

impl TsModel {
    pub fn fit(covs: &[SpdMatrix], labels: &[usize], n_classes: usize, kind: HeadKind, seed: u64) -> Result<Self> {
        group(covs, labels, n_classes)?;
        let reference = riemannian_mean(covs)?;
        let ts = TangentSpace::new(reference);
        let x = tangent_matrix(&ts, covs)?;
        let head = LinearHead::fit(kind, &x, labels, n_classes, seed)?;
        Ok(Self { ts, head })
    }

    pub fn features(&self, covs: &[SpdMatrix]) -> Result<DMatrix<f64>> {
        tangent_matrix(&self.ts, covs)
    }

    pub fn predict_proba(&self, covs: &[SpdMatrix]) -> Result<DMatrix<f64>> {
        self.head.predict_proba(&self.features(covs)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spd::{exp_map, SymMatrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn around(center: &SpdMatrix, spread: f64, rng: &mut ChaCha8Rng) -> SpdMatrix {
        let n = center.dim();
        let g = DMatrix::from_fn(n, n, |_, _| spread * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng));
        let s = SymMatrix::from_symmetrized((&g + g.transpose()) * 0.5).unwrap();
        let c = center.sqrt();
        let inner = s.exp().unwrap();
        SpdMatrix::new(c.as_matrix() * inner.as_matrix() * c.as_matrix()).unwrap()
    }

    fn clusters(n: usize, per_class: usize, sep: f64, spread: f64, seed: u64) -> (Vec<SpdMatrix>, Vec<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = SpdMatrix::identity(n);
        let mut dir = DMatrix::zeros(n, n);
        dir[(0, 0)] = sep;
        dir[(1, 1)] = -sep;
        let c1 = exp_map(&base, &SymMatrix::new(dir).unwrap()).unwrap();
        let centers = [base, c1];
        let mut covs = Vec::new();
        let mut labels = Vec::new();
        for i in 0..2 * per_class {
            covs.push(around(&centers[i % 2], spread, &mut rng));
            labels.push(i % 2);
        }
        (covs, labels)
    }

    fn accuracy(p: &DMatrix<f64>, labels: &[usize]) -> f64 {
        let hits = p
            .row_iter()
            .zip(labels)
            .filter(|(r, &l)| r.transpose().argmax().0 == l)
            .count();
        hits as f64 / labels.len() as f64
    }

    #[test]
    fn mdm_singletons_and_means() {
        let (covs, labels) = clusters(3, 1, 1.0, 0.1, 1);
        let m = Mdm::fit(&covs, &labels, 2).unwrap();
        assert_eq!(m.means[0], covs[0]);
        let p = m.predict_proba(&[m.means[1].clone()]).unwrap();
        assert!(p[(0, 1)] > p[(0, 0)]);
        assert!(Mdm::fit(&covs[..1], &labels[..1], 2).is_err());
    }

    #[test]
    fn mdm_clusters_and_congruence() {
        let (train, yt) = clusters(4, 40, 1.0, 0.15, 2);
        let (test, ys) = clusters(4, 40, 1.0, 0.15, 3);
        let m = Mdm::fit(&train, &yt, 2).unwrap();
        let p = m.predict_proba(&test).unwrap();
        assert!(accuracy(&p, &ys) > 0.9);
        for row in p.row_iter() {
            assert!((row.sum() - 1.0).abs() < 1e-9);
        }
        let w = DMatrix::from_fn(4, 4, |i, j| if i == j { 2.0 } else { 0.3 * (i + 2 * j) as f64 / 7.0 });
        let tw: Vec<SpdMatrix> = train.iter().map(|c| c.congruence(&w).unwrap()).collect();
        let sw: Vec<SpdMatrix> = test.iter().map(|c| c.congruence(&w).unwrap()).collect();
        let pw = Mdm::fit(&tw, &yt, 2).unwrap().predict_proba(&sw).unwrap();
        for (a, b) in p.row_iter().zip(pw.row_iter()) {
            assert_eq!(a.transpose().argmax().0, b.transpose().argmax().0);
        }
    }

    #[test]
    fn fgmdm_projection_is_idempotent() {
        let (covs, labels) = clusters(4, 20, 0.8, 0.2, 4);
        let m = FgMdm::fit(&covs, &labels, 2).unwrap();
        let rank = m.projector.trace();
        assert!((rank - 1.0).abs() < 1e-9);
        let pp = &m.projector * &m.projector;
        assert!((pp - &m.projector).amax() < 1e-9);
        let once = m.filter(&covs[3]).unwrap();
        let twice = m.filter(&once).unwrap();
        assert!((once.as_matrix() - twice.as_matrix()).amax() < 1e-9);
    }

    #[test]
    fn fgmdm_not_worse_than_mdm_in_high_dim() {
        let (train, yt) = clusters(16, 40, 0.6, 0.12, 5);
        let (test, ys) = clusters(16, 40, 0.6, 0.12, 6);
        let a_mdm = accuracy(&Mdm::fit(&train, &yt, 2).unwrap().predict_proba(&test).unwrap(), &ys);
        let a_fg = accuracy(&FgMdm::fit(&train, &yt, 2).unwrap().predict_proba(&test).unwrap(), &ys);
        assert!(a_fg >= a_mdm - 0.02, "fg {a_fg} mdm {a_mdm}");
    }

    #[test]
    fn tangent_head_dims_and_reference() {
        let (covs, labels) = clusters(8, 10, 1.0, 0.1, 7);
        let m = TsModel::fit(&covs, &labels, 2, HeadKind::Logistic { l1_ratio: 0.0, c: 1.0 }, 0).unwrap();
        let f = m.features(&covs).unwrap();
        assert_eq!(f.ncols(), 36);
        let z = m.features(&[m.ts.base().clone()]).unwrap();
        assert!(z.amax() < 1e-12);
    }
}
