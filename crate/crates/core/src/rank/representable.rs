use num_traits::FromPrimitive;
use serde::{Deserialize, Serialize};

use super::gf::{Field, Matrix};
use super::{GroundSet, RankFunction, Subset};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// One subspace per ground element, each given by a `dim × d_i` matrix whose
/// columns span it.
#[derive(Clone, Debug)]
pub struct SubspaceFamily {
    pub field: Field,
    pub dim: usize,
    pub ground: GroundSet,
    pub spans: Vec<Matrix>,
}

impl SubspaceFamily {
    pub fn new(q: u32, dim: usize, ground: GroundSet, spans: Vec<Matrix>) -> Result<Self> {
        let field = Field::new(q)?;
        if spans.len() != ground.len() {
            return Err(Error::Shape(format!("{} spans for {} ground elements", spans.len(), ground.len())));
        }
        for m in &spans {
            if m.rows() != dim {
                return Err(Error::Shape(format!("span has {} rows, ambient dimension is {dim}", m.rows())));
            }
            m.check_entries(&field)?;
        }
        Ok(Self { field, dim, ground, spans })
    }

    pub fn from_export(export: &SubspaceFamilyExport) -> Result<Self> {
        let ground = GroundSet::new(export.spans.iter().map(|(l, _)| l.clone()).collect())?;
        let spans = export
            .spans
            .iter()
            .map(|(_, rows)| {
                let cols = rows.first().map_or(0, |r| r.len());
                if rows.is_empty() {
                    Ok(Matrix::zeros(export.dim, 0))
                } else {
                    Matrix::from_rows(rows.len(), cols, rows)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(export.q, export.dim, ground, spans)
    }

    pub fn span_of(&self, s: Subset) -> Matrix {
        let parts: Vec<&Matrix> = s.iter().map(|i| &self.spans[i]).collect();
        Matrix::hconcat(self.dim, &parts).expect("spans share the ambient dimension")
    }
}

/// JSON form: `{"q":2, "dim":2, "spans":[["label", [[row],…]], …]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubspaceFamilyExport {
    pub q: u32,
    pub dim: usize,
    pub spans: Vec<(String, Vec<Vec<u32>>)>,
}

/// `h(α) = dim span{U_i : i ∈ α}`.
pub fn representable_function(family: &SubspaceFamily) -> RankFunction {
    RankFunction::from_fn(family.ground.clone(), |s| {
        let r = family.span_of(s).rank(&family.field);
        Rational::from_usize(r).unwrap()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn col(v: &[u32]) -> Matrix {
        Matrix::from_rows(v.len(), 1, &v.iter().map(|&x| vec![x]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn identical_lines() {
        let g = GroundSet::from_strs(&["1", "2"]).unwrap();
        let f = SubspaceFamily::new(2, 2, g, vec![col(&[1, 0]), col(&[1, 0])]).unwrap();
        let h = representable_function(&f);
        assert!(h.values()[1..].iter().all(|v| *v == q(1)));
    }

    #[test]
    fn three_lines_in_the_plane() {
        let g = GroundSet::from_strs(&["1", "2", "3"]).unwrap();
        let f = SubspaceFamily::new(2, 2, g, vec![col(&[1, 0]), col(&[0, 1]), col(&[1, 1])]).unwrap();
        let h = representable_function(&f);
        for m in 1..8u64 {
            let expect = if Subset(m).len() == 1 { 1 } else { 2 };
            assert_eq!(h.get(Subset(m)), &q(expect));
        }
        assert!(h.is_polymatroid().is_ok());
    }

    #[test]
    fn zero_subspaces() {
        let g = GroundSet::from_strs(&["1", "2"]).unwrap();
        let f = SubspaceFamily::new(3, 2, g.clone(), vec![Matrix::zeros(2, 1), Matrix::zeros(2, 0)]).unwrap();
        assert_eq!(representable_function(&f), RankFunction::zero(g));
    }

    #[test]
    fn rejects_bad_entries() {
        let g = GroundSet::from_strs(&["1"]).unwrap();
        assert!(SubspaceFamily::new(2, 2, g, vec![col(&[2, 0])]).is_err());
    }
}
