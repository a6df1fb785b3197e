//! Invariant geometry of an instantiated model: Levi-Civita connection,
//! curvature, Ricci data, and the derived flags.
//!
//! Everything is expressed on the four-dimensional complement.  The
//! connection is a table of four matrices, where column `j` of the matrix
//! for direction `i` is the covariant derivative of the `j`-th basis vector
//! along the `i`-th.  Curvature operators carry the correction term coming
//! from the isotropy part of brackets, so the same formulas serve both the
//! reductive and the trivial-isotropy cases.

use crate::linalg::Matrix;
use crate::model::HomogeneousModel;
use crate::scalar::Scalar;

/// Connection, curvature, and Ricci data of a model, with derived flags.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub metric: Matrix,
    /// Covariant derivative matrices, one per complement direction.
    pub connection: Vec<Matrix>,
    /// Curvature operators `R(u_i, u_j)`, antisymmetric in the pair.
    pub curvature: Vec<Vec<Matrix>>,
    /// Fully lowered curvature: entry `(k, h)` of `lowered[i][j]`.
    pub lowered: Vec<Vec<Matrix>>,
    /// Ricci tensor (symmetric bilinear form).
    pub ricci: Matrix,
    /// Ricci operator, metric-inverse times Ricci tensor.
    pub ricci_operator: Matrix,
    /// Scalar curvature.
    pub tau: Scalar,
    /// Covariant derivative of the Ricci tensor along each direction.
    pub nabla_ricci: Vec<Matrix>,
    /// Weyl conformal curvature, same layout as `lowered`.
    pub weyl: Vec<Vec<Matrix>>,
    pub conformally_flat: bool,
    pub ricci_parallel: bool,
    pub locally_symmetric: bool,
}

/// Levi-Civita connection matrices of the model.
pub fn levi_civita(m: &HomogeneousModel) -> Vec<Matrix> {
    let g = &m.metric;
    let ginv = g.inverse().expect("metric is nondegenerate");
    let half = Scalar::rat(1, 2);
    let dot_col = |v: &[Scalar], k: usize| -> Scalar {
        let mut acc = Scalar::zero();
        for (t, c) in v.iter().enumerate() {
            if !c.is_zero() {
                acc += &(c * g.get(t, k));
            }
        }
        acc
    };
    (0..4)
        .map(|i| {
            let mut lam = Matrix::zeros(4, 4);
            for j in 0..4 {
                let mut rhs = Vec::with_capacity(4);
                let (bij, _) = m.bracket_m(i, j);
                for k in 0..4 {
                    let (bjk, _) = m.bracket_m(j, k);
                    let (bki, _) = m.bracket_m(k, i);
                    let s = dot_col(&bij, k) - dot_col(&bjk, i) + dot_col(&bki, j);
                    rhs.push(&half * &s);
                }
                let col = ginv.mul_vec(&rhs);
                for (k, v) in col.into_iter().enumerate() {
                    lam.set(k, j, v);
                }
            }
            lam
        })
        .collect()
}

/// Curvature operators `R(u_i, u_j)` for a model and its connection.
pub fn curvature_operators(m: &HomogeneousModel, lams: &[Matrix]) -> Vec<Vec<Matrix>> {
    let mut ops = vec![vec![Matrix::zeros(4, 4); 4]; 4];
    for i in 0..4 {
        for j in (i + 1)..4 {
            let (mp, hp) = m.bracket_m(i, j);
            let mut lam_br = Matrix::zeros(4, 4);
            for (k, c) in mp.iter().enumerate() {
                if !c.is_zero() {
                    lam_br = lam_br.add(&lams[k].scale(c));
                }
            }
            let r = lams[i]
                .matmul(&lams[j])
                .sub(&lams[j].matmul(&lams[i]))
                .sub(&lam_br)
                .sub(&m.isotropy_action(&hp));
            ops[j][i] = r.neg();
            ops[i][j] = r;
        }
    }
    ops
}

fn ricci_tensor(ops: &[Vec<Matrix>]) -> Matrix {
    Matrix::from_fn(4, 4, |a, b| {
        let mut acc = Scalar::zero();
        for (i, row) in ops.iter().enumerate() {
            acc += row[a].get(i, b);
        }
        acc
    })
}

impl Geometry {
    pub fn new(m: &HomogeneousModel) -> Self {
        let g = m.metric.clone();
        let ginv = g.inverse().expect("metric is nondegenerate");
        let connection = levi_civita(m);
        let curvature = curvature_operators(m, &connection);
        let lowered: Vec<Vec<Matrix>> = curvature
            .iter()
            .map(|row| row.iter().map(|r| g.matmul(r).transpose()).collect())
            .collect();
        let ricci = ricci_tensor(&curvature);
        debug_assert!(ricci.is_symmetric());
        let ricci_operator = ginv.matmul(&ricci);
        let tau = ricci_operator.trace();

        let nabla_ricci: Vec<Matrix> = connection
            .iter()
            .map(|lam| {
                lam.transpose()
                    .matmul(&ricci)
                    .add(&ricci.matmul(lam))
                    .neg()
            })
            .collect();
        let ricci_parallel = nabla_ricci.iter().all(Matrix::is_zero);

        let sixth = Scalar::rat(1, 6);
        let tau6 = &tau * &sixth;
        let half = Scalar::rat(1, 2);
        let weyl: Vec<Vec<Matrix>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        Matrix::from_fn(4, 4, |k, h| {
                            let mut w = lowered[i][j].get(k, h).clone();
                            let corr = &(&(g.get(i, h) * ricci.get(j, k))
                                + &(g.get(j, k) * ricci.get(i, h)))
                                - &(&(g.get(i, k) * ricci.get(j, h))
                                    + &(g.get(j, h) * ricci.get(i, k)));
                            w = &w - &(&half * &corr);
                            let tr = &(g.get(i, h) * g.get(j, k))
                                - &(g.get(i, k) * g.get(j, h));
                            &w + &(&tau6 * &tr)
                        })
                    })
                    .collect()
            })
            .collect();
        let conformally_flat = weyl.iter().flatten().all(Matrix::is_zero);

        let locally_symmetric = nabla_curvature_is_zero(&connection, &lowered);

        Geometry {
            metric: g,
            connection,
            curvature,
            lowered,
            ricci,
            ricci_operator,
            tau,
            nabla_ricci,
            weyl,
            conformally_flat,
            ricci_parallel,
            locally_symmetric,
        }
    }
}

fn nabla_curvature_is_zero(lams: &[Matrix], lowered: &[Vec<Matrix>]) -> bool {
    let r4 = |a: usize, b: usize, c: usize, d: usize| lowered[a][b].get(c, d);
    for (_, lam) in lams.iter().enumerate() {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    for h in 0..4 {
                        let mut s = Scalar::zero();
                        for t in 0..4 {
                            s += &(lam.get(t, j) * r4(t, k, l, h));
                            s += &(lam.get(t, k) * r4(j, t, l, h));
                            s += &(lam.get(t, l) * r4(j, k, t, h));
                            s += &(lam.get(t, h) * r4(j, k, l, t));
                        }
                        if !s.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{builtin_catalog, find_entry, instantiate, ParamEnv};
    use crate::scalar::Rat;
    use num::BigInt;

    fn env(pairs: &[(&str, i64, i64)]) -> ParamEnv {
        pairs
            .iter()
            .map(|(n, p, q)| (n.to_string(), Rat::new(BigInt::from(*p), BigInt::from(*q))))
            .collect()
    }

    fn model(id: &str, pairs: &[(&str, i64, i64)]) -> HomogeneousModel {
        let e = find_entry(builtin_catalog(), id).unwrap();
        instantiate(e, &env(pairs)).unwrap()
    }

    fn rows(m: &Matrix) -> Vec<Vec<Scalar>> {
        (0..m.n_rows()).map(|i| m.row(i)).collect()
    }

    #[test]
    fn connection_of_the_rotation_family()  {
        let m = model("thm3.2-i-eps+1", &[("alpha", 1, 1)]);
        let lams = levi_civita(&m);
        assert_eq!(
            lams[0],
            Matrix::from_int_rows(&[&[0, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 0]])
        );
        assert_eq!(
            lams[1],
            Matrix::from_int_rows(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, -2], &[0, 0, 2, 0]])
        );
        assert_eq!(
            lams[2],
            Matrix::from_int_rows(&[&[0, -2, 0, 0], &[2, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]])
        );
        assert_eq!(
            lams[3],
            Matrix::from_int_rows(&[&[0, 0, 0, 0], &[0, 0, -1, 0], &[0, -1, 0, 0], &[0, 0, 0, 0]])
        );
    }

    #[test]
    fn connection_with_isotropy() {
        let m = model("komrakov-1.3^1:2", &[("a", 1, 1), ("b", 0, 1), ("c", 0, 1), ("l", 1, 1)]);
        let lams = levi_civita(&m);
        let half = Scalar::rat(1, 2);
        let exp3 = Matrix::from_rows(vec![
            vec![Scalar::int(-1), half.clone(), Scalar::zero(), Scalar::zero()],
            vec![Scalar::int(-1), Scalar::zero(), Scalar::zero(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), Scalar::zero(), half.clone()],
            vec![Scalar::zero(), Scalar::zero(), Scalar::int(-1), Scalar::int(1)],
        ]);
        assert_eq!(lams[2], exp3);
        let exp4 = Matrix::from_rows(vec![
            vec![Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero()],
            vec![Scalar::int(1), -half.clone(), Scalar::zero(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), half.clone(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), Scalar::int(1), Scalar::zero()],
        ]);
        assert_eq!(lams[3], exp4);
        // At these parameters the first direction acts exactly like the
        // isotropy generator.
        assert_eq!(lams[0], m.isotropy[0]);
    }

    #[test]
    fn connection_invariants() {
        for (id, pairs) in [
            ("thm3.2-i-eps+1", &[("alpha", 2, 3)][..]),
            ("thm3.3-ii-eps-1", &[("alpha", 1, 2)][..]),
            ("thm4.1-(1,3)", &[("c1", -1, 2), ("c2", 1, 1)][..]),
            ("thm4.2-item1", &[("c1", 2, 1), ("c2", 1, 3), ("c3", -1, 1)][..]),
            ("komrakov-1.3^1:2", &[("a", 2, 1), ("b", 1, 1), ("c", -1, 1), ("l", 3, 1)][..]),
        ] {
            let m = model(id, pairs);
            let lams = levi_civita(&m);
            // Metric compatibility.
            for lam in &lams {
                assert!(
                    lam.transpose()
                        .matmul(&m.metric)
                        .add(&m.metric.matmul(lam))
                        .is_zero(),
                    "metric compatibility fails for {id}"
                );
            }
            // Torsion-freeness.
            for i in 0..4 {
                for j in 0..4 {
                    let (mp, _) = m.bracket_m(i, j);
                    for k in 0..4 {
                        let lhs = &*lams[i].get(k, j) - lams[j].get(k, i);
                        assert_eq!(lhs, mp[k], "torsion fails for {id} at ({i},{j},{k})");
                    }
                }
            }
        }
    }

    #[test]
    fn curvature_pinned_and_invariant() {
        let m = model("thm3.2-i-eps+1", &[("alpha", 1, 1)]);
        let geo = Geometry::new(&m);
        assert_eq!(
            geo.curvature[0][1],
            Matrix::from_int_rows(&[
                &[0, 2, 0, 0],
                &[-2, 0, 0, -2],
                &[0, 0, 0, 0],
                &[0, -2, 0, 0]
            ])
        );
        assert!(geo.curvature[1][2].is_zero());
        for i in 0..4 {
            for j in 0..4 {
                // Antisymmetry in the operator pair.
                assert_eq!(geo.curvature[i][j], geo.curvature[j][i].neg());
                for k in 0..4 {
                    for h in 0..4 {
                        // Antisymmetry of the lowered tensor in its last pair.
                        assert_eq!(
                            *geo.lowered[i][j].get(k, h),
                            -geo.lowered[i][j].get(h, k)
                        );
                        // Pair-interchange symmetry.
                        assert_eq!(geo.lowered[i][j].get(k, h), geo.lowered[k][h].get(i, j));
                    }
                }
            }
        }
        // First Bianchi identity on operators.
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let ei = Matrix::identity(4).column(i);
                    let ej = Matrix::identity(4).column(j);
                    let ek = Matrix::identity(4).column(k);
                    let mut s = geo.curvature[i][j].mul_vec(&ek);
                    for (t, v) in geo.curvature[j][k].mul_vec(&ei).into_iter().enumerate() {
                        s[t] += &v;
                    }
                    for (t, v) in geo.curvature[k][i].mul_vec(&ej).into_iter().enumerate() {
                        s[t] += &v;
                    }
                    assert!(s.iter().all(Scalar::is_zero), "Bianchi fails at ({i},{j},{k})");
                }
            }
        }
    }

    #[test]
    fn ricci_data_pinned() {
        let m = model("thm3.2-i-eps+1", &[("alpha", 1, 1)]);
        let geo = Geometry::new(&m);
        assert_eq!(
            geo.ricci,
            Matrix::from_int_rows(&[
                &[0, 0, 0, 4],
                &[0, 4, 0, 0],
                &[0, 0, 4, 0],
                &[4, 0, 0, 0]
            ])
        );
        assert_eq!(
            geo.ricci_operator,
            Matrix::from_int_rows(&[
                &[0, 0, 0, 4],
                &[0, 4, 0, 0],
                &[0, 0, -4, 0],
                &[-4, 0, 0, 0]
            ])
        );
        assert!(geo.tau.is_zero());
        assert!(!geo.ricci_parallel);
        assert!(!geo.locally_symmetric);

        let m = model("thm4.2-item1", &[("c1", 1, 1), ("c2", 0, 1), ("c3", 0, 1)]);
        let geo = Geometry::new(&m);
        assert_eq!(
            geo.ricci,
            Matrix::from_int_rows(&[
                &[0, 0, 0, 0],
                &[0, 1, -1, 0],
                &[0, -1, 1, 0],
                &[0, 0, 0, 0]
            ])
        );
        assert_eq!(
            geo.ricci_operator,
            Matrix::from_int_rows(&[
                &[0, 0, 0, 0],
                &[0, 1, -1, 0],
                &[0, 1, -1, 0],
                &[0, 0, 0, 0]
            ])
        );
        assert!(geo.tau.is_zero());
        // The operator squares to zero but is nonzero: no eigenbasis exists.
        assert!(geo.ricci_operator.pow(2).is_zero());
        assert!(!geo.ricci_operator.is_zero());
        assert!(!geo.ricci_parallel);

        let m = model("komrakov-1.3^1:2", &[("a", 1, 1), ("b", 0, 1), ("c", 0, 1), ("l", 1, 1)]);
        let geo = Geometry::new(&m);
        let half = Scalar::rat(1, 2);
        assert_eq!(
            rows(&geo.ricci)[2],
            vec![Scalar::zero(), Scalar::zero(), Scalar::int(-1), Scalar::int(1)]
        );
        assert_eq!(
            rows(&geo.ricci)[3],
            vec![Scalar::zero(), Scalar::zero(), Scalar::int(1), -half]
        );
        assert!(geo.ricci_operator.det().is_zero());
        assert!(!geo.ricci_parallel);
    }

    #[test]
    fn weyl_verdicts() {
        let cases: &[(&str, &[(&str, i64, i64)])] = &[
            ("thm3.2-i-eps+1", &[("alpha", 1, 1)]),
            ("thm3.2-ii-eps-1", &[("alpha", 2, 1)]),
            ("thm3.3-i-eps+1", &[("alpha", 1, 2)]),
            ("thm3.3-ii-eps+1", &[("alpha", 3, 1)]),
            ("thm4.1-(1,3)", &[("c1", -7, 2), ("c2", 1, 1)]),
            ("thm4.2-item1", &[("c1", 1, 1), ("c2", 2, 1), ("c3", 3, 1)]),
            ("thm4.2-item2", &[]),
            ("thm4.2-item3", &[("c1", 1, 1), ("c2", 2, 1), ("c3", 0, 1), ("c4", 1, 1)]),
            ("komrakov-1.3^1:2", &[("a", 1, 1), ("b", 2, 1), ("c", -1, 1), ("l", 2, 1)]),
        ];
        for (id, pairs) in cases {
            let m = model(id, pairs);
            let geo = Geometry::new(&m);
            assert!(geo.conformally_flat, "{id} should be conformally flat");
        }
        // A deliberately wrong metric on the same algebra is not.
        let mut m = model("thm3.2-i-eps+1", &[("alpha", 1, 1)]);
        m.metric = Matrix::from_int_rows(&[
            &[1, 0, 0, 0],
            &[0, 2, 0, 0],
            &[0, 0, -1, 0],
            &[0, 0, 0, -1],
        ]);
        let geo = Geometry::new(&m);
        assert!(!geo.conformally_flat);
    }

    #[test]
    fn metric_scaling() {
        let pairs = &[("a", 1, 1), ("b", 0, 1), ("c", 0, 1), ("l", 1, 1)][..];
        let m = model("komrakov-1.3^1:2", pairs);
        let geo = Geometry::new(&m);
        let mut m3 = m.clone();
        m3.metric = m.metric.scale(&Scalar::int(3));
        let geo3 = Geometry::new(&m3);
        assert_eq!(geo.connection, geo3.connection);
        assert_eq!(geo.curvature, geo3.curvature);
        let third = Scalar::rat(1, 3);
        assert_eq!(geo3.ricci_operator, geo.ricci_operator.scale(&third));
        assert_eq!(geo3.tau, &geo.tau * &third);
        assert_eq!(geo.conformally_flat, geo3.conformally_flat);
        assert_eq!(geo.ricci_parallel, geo3.ricci_parallel);
    }
}
