use crate::bench::{Method, Problem};
use crate::error::Result;
use crate::linalg::{
    gen_banded, gen_example1_with_order, mm_read, random_saddle, random_vector, saddle_from_ata, CsrMatrix,
    SaddleSystem,
};

#[derive(Debug, Clone)]
pub enum System {
    Saddle(SaddleSystem),
    Matrix(CsrMatrix),
}

/// A concrete linear system `A x = rhs`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub system: System,
    pub rhs: Vec<f64>,
}

impl Instance {
    /// The system matrix (assembled for saddle systems).
    pub fn matrix(&self) -> CsrMatrix {
        match &self.system {
            System::Saddle(s) => s.assemble(),
            System::Matrix(a) => a.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }
}

impl Problem {
    /// Builds the system. Band problems use an all-ones right-hand side; the
    /// others draw it from `seed`.
    pub fn instance(&self, method: Method, seed: u64) -> Result<Instance> {
        let system = match self {
            Problem::Example1 { order } => System::Saddle(gen_example1_with_order(*order)?),
            Problem::Banded3 => System::Matrix(gen_banded(128, &[-1, 0, 1], &[2.0, 6.0, 2.0])?),
            Problem::Banded5 => System::Matrix(gen_banded(128, &[-2, -1, 0, 1, 2], &[1.0, 2.0, 6.0, 2.0, 1.0])?),
            Problem::Banded7 => System::Matrix(gen_banded(
                256,
                &[-3, -2, -1, 0, 1, 2, 3],
                &[0.5, 1.0, 2.0, 6.0, 2.0, 1.0, 0.5],
            )?),
            Problem::TridiagPaper => System::Matrix(gen_banded(128, &[-1, 0, 1], &[-1.0, 2.0, 0.5])?),
            Problem::MmFile(path) => {
                let a = mm_read(path)?;
                if method == Method::PslrGmres {
                    System::Saddle(saddle_from_ata(a, seed)?)
                } else {
                    System::Matrix(a)
                }
            }
            Problem::RandomSaddle { n, p, seed: s } => System::Saddle(random_saddle(*n, *p, s.unwrap_or(seed))?),
        };
        let dim = match &system {
            System::Saddle(s) => s.dim(),
            System::Matrix(a) => a.nrows(),
        };
        let rhs = if self.is_banded() { vec![1.0; dim] } else { random_vector(dim, seed) };
        Ok(Instance { system, rhs })
    }

    pub fn is_banded(&self) -> bool {
        matches!(self, Problem::Banded3 | Problem::Banded5 | Problem::Banded7 | Problem::TridiagPaper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let i = Problem::Banded7.instance(Method::Gmres, 0).unwrap();
        assert_eq!(i.dim(), 256);
        assert_eq!(i.matrix().bandwidth(), 3);
        assert_eq!(i.rhs, vec![1.0; 256]);
        let i = Problem::Example1 { order: 256 }.instance(Method::PslrGmres, 4).unwrap();
        assert_eq!(i.dim(), 256);
        assert!(matches!(i.system, System::Saddle(_)));
        let j = Problem::Example1 { order: 256 }.instance(Method::PslrGmres, 4).unwrap();
        assert_eq!(i.rhs, j.rhs);
    }

    #[test]
    fn missing_file_is_io_error() {
        let p = Problem::MmFile("/nonexistent/x.mtx".into());
        assert!(matches!(p.instance(Method::Gmres, 0), Err(crate::Error::Io(_))));
    }
}
