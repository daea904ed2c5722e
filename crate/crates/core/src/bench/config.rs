use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pslr::AtaSolver;

#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    /// The saddle test system at assembled order `order` (256 by default).
    Example1 { order: usize },
    /// `tridiag(2, 6, 2)`, order 128.
    Banded3,
    /// Band `(1, 2, 6, 2, 1)`, order 128.
    Banded5,
    /// Band `(0.5, 1, 2, 6, 2, 1, 0.5)`, order 256.
    Banded7,
    /// `tridiag(-1, 2, 0.5)`, order 128.
    TridiagPaper,
    /// A Matrix Market file. Used as `AᵀA` of a saddle system for
    /// `pslr_gmres`, and as the system matrix otherwise.
    MmFile(PathBuf),
    /// [`random_saddle`](crate::linalg::random_saddle); the seed defaults to
    /// the run seed.
    RandomSaddle { n: usize, p: usize, seed: Option<u64> },
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::Example1 { order: 256 } => write!(f, "example1"),
            Problem::Example1 { order } => write!(f, "example1:{order}"),
            Problem::Banded3 => write!(f, "banded3"),
            Problem::Banded5 => write!(f, "banded5"),
            Problem::Banded7 => write!(f, "banded7"),
            Problem::TridiagPaper => write!(f, "tridiag_paper"),
            Problem::MmFile(path) => {
                let stem = path.file_stem().map(|s| s.to_string_lossy()).unwrap_or_default();
                write!(f, "mm:{stem}")
            }
            Problem::RandomSaddle { n, p, seed: Some(s) } => write!(f, "random_saddle:{n},{p},{s}"),
            Problem::RandomSaddle { n, p, seed: None } => write!(f, "random_saddle:{n},{p}"),
        }
    }
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Config(format!("invalid {what}: {s:?}")))
}

impl FromStr for Problem {
    type Err = Error;

    /// `example1[:order]`, `banded3`, `banded5`, `banded7`, `tridiag_paper`,
    /// `mm:<path>`, `random_saddle[:n,p[,seed]]`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let head = head.replace('-', "_").to_ascii_lowercase();
        match (head.as_str(), arg) {
            ("example1", None) => Ok(Problem::Example1 { order: 256 }),
            ("example1", Some(a)) => Ok(Problem::Example1 { order: parse_num(a, "order")? }),
            ("banded3", None) => Ok(Problem::Banded3),
            ("banded5", None) => Ok(Problem::Banded5),
            ("banded7", None) => Ok(Problem::Banded7),
            ("tridiag_paper", None) => Ok(Problem::TridiagPaper),
            ("mm" | "mm_file", Some(path)) if !path.is_empty() => Ok(Problem::MmFile(PathBuf::from(path))),
            ("random_saddle", None) => Ok(Problem::RandomSaddle { n: 128, p: 128, seed: None }),
            ("random_saddle", Some(a)) => {
                let parts: Vec<&str> = a.split(',').collect();
                match parts.as_slice() {
                    [n, p] => Ok(Problem::RandomSaddle { n: parse_num(n, "n")?, p: parse_num(p, "p")?, seed: None }),
                    [n, p, seed] => Ok(Problem::RandomSaddle {
                        n: parse_num(n, "n")?,
                        p: parse_num(p, "p")?,
                        seed: Some(parse_num(seed, "seed")?),
                    }),
                    _ => Err(Error::Config(format!("random_saddle expects n,p[,seed], got {a:?}"))),
                }
            }
            _ => Err(Error::Config(format!("unknown problem {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// PSLR (saddle problems) or the splitting-based approximate inverse
    /// (plain matrices) followed by GMRES.
    PslrGmres,
    Gmres,
    Cg,
    PcgIc0,
    /// Splitting-based approximate inverse `A = I - F` followed by GMRES.
    Pinv,
    Adi,
    JacobiGmres,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::PslrGmres,
        Method::Gmres,
        Method::Cg,
        Method::PcgIc0,
        Method::Pinv,
        Method::Adi,
        Method::JacobiGmres,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::PslrGmres => "pslr_gmres",
            Method::Gmres => "gmres",
            Method::Cg => "cg",
            Method::PcgIc0 => "pcg_ic0",
            Method::Pinv => "pinv",
            Method::Adi => "adi",
            Method::JacobiGmres => "jacobi_gmres",
        }
    }

    /// Methods whose setup produces an approximate inverse usable as `x0 = P b`.
    pub fn has_pre_guess(self) -> bool {
        matches!(self, Method::PslrGmres | Method::Pinv)
    }

    /// Methods that take `m` and `r_k`.
    pub fn uses_series(self) -> bool {
        self.has_pre_guess()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('-', "_").to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| Error::Config(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialGuess {
    /// `x0 = P b` for the method's approximate inverse `P`.
    Pre,
    Zero,
    /// Uniform `[0, 1)` entries; the seed defaults to the run seed plus one.
    Random(Option<u64>),
}

impl fmt::Display for InitialGuess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialGuess::Pre => write!(f, "pre"),
            InitialGuess::Zero => write!(f, "zero"),
            InitialGuess::Random(None) => write!(f, "random"),
            InitialGuess::Random(Some(s)) => write!(f, "random:{s}"),
        }
    }
}

impl FromStr for InitialGuess {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().split_once(':') {
            None => match s.trim().to_ascii_lowercase().as_str() {
                "pre" => Ok(InitialGuess::Pre),
                "zero" => Ok(InitialGuess::Zero),
                "random" => Ok(InitialGuess::Random(None)),
                _ => Err(Error::Config(format!("unknown initial guess {s:?}"))),
            },
            Some(("random", seed)) => Ok(InitialGuess::Random(Some(parse_num(seed, "seed")?))),
            Some(_) => Err(Error::Config(format!("unknown initial guess {s:?}"))),
        }
    }
}

/// How the PSLR / Pinv approximate inverse enters GMRES.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PslrSide {
    /// Only through the initial guess; GMRES itself is unpreconditioned.
    #[default]
    Warm,
    /// Additionally as a right preconditioner.
    Right,
}

impl FromStr for PslrSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "warm" => Ok(PslrSide::Warm),
            "right" => Ok(PslrSide::Right),
            _ => Err(Error::Config(format!("unknown preconditioning side {s:?}"))),
        }
    }
}

impl FromStr for AtaSolver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "auto" => Ok(AtaSolver::Auto),
            "ilu0" | "ilu" => Ok(AtaSolver::Ilu0),
            "ic0" | "ic" => Ok(AtaSolver::Ic0),
            "lu" => Ok(AtaSolver::Lu),
            "cholesky" | "chol" => Ok(AtaSolver::Cholesky),
            _ => Err(Error::Config(format!("unknown AᵀA solver {s:?}"))),
        }
    }
}

/// Largest `m` accepted without `allow_large_m`.
pub const DEFAULT_MAX_M: usize = 5;

/// One solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub problem: Problem,
    pub method: Method,
    pub m: usize,
    pub r_k: usize,
    pub tol: f64,
    pub maxit: usize,
    /// `None` picks `Pre` for methods that have one and `Zero` otherwise.
    pub x0: Option<InitialGuess>,
    pub reorder: bool,
    pub seed: u64,
    pub side: PslrSide,
    pub ata_solver: AtaSolver,
    /// Shift of the splitting iteration.
    pub alpha: f64,
    pub allow_large_m: bool,
}

impl BenchConfig {
    pub fn new(problem: Problem, method: Method) -> Self {
        Self {
            problem,
            method,
            m: 5,
            r_k: 15,
            tol: 1e-6,
            maxit: 500,
            x0: None,
            reorder: false,
            seed: 0,
            side: PslrSide::Warm,
            ata_solver: AtaSolver::Auto,
            alpha: 1.5,
            allow_large_m: false,
        }
    }

    pub fn initial_guess(&self) -> InitialGuess {
        self.x0.unwrap_or(if self.method.has_pre_guess() { InitialGuess::Pre } else { InitialGuess::Zero })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if self.maxit == 0 {
            return Err(Error::Config("maxit must be at least 1".into()));
        }
        if self.m > DEFAULT_MAX_M && !self.allow_large_m {
            return Err(Error::Config(format!(
                "m = {} exceeds {DEFAULT_MAX_M}; pass allow_large_m to override",
                self.m
            )));
        }
        if self.method.uses_series() && self.r_k == 0 {
            return Err(Error::Config("r_k must be at least 1".into()));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::Config("alpha must be positive".into()));
        }
        let x0 = self.initial_guess();
        if x0 == InitialGuess::Pre && !self.method.has_pre_guess() {
            return Err(Error::Config(format!("x0 = pre needs pslr_gmres or pinv, not {}", self.method)));
        }
        if self.method == Method::Adi && x0 != InitialGuess::Zero {
            return Err(Error::Config("adi always starts from x0 = 0".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn problem_round_trip() {
        for s in ["example1", "example1:512", "banded3", "banded5", "banded7", "tridiag_paper", "random_saddle:40,20,3"] {
            assert_eq!(s.parse::<Problem>().unwrap().to_string(), s);
        }
        assert_eq!("mm:dir/494_bus.mtx".parse::<Problem>().unwrap().to_string(), "mm:494_bus");
        assert!("banded4".parse::<Problem>().is_err());
        assert!("random_saddle:1".parse::<Problem>().is_err());
    }

    #[test]
    fn method_and_guess_parse() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert_eq!("pslr-gmres".parse::<Method>().unwrap(), Method::PslrGmres);
        assert_eq!("random:7".parse::<InitialGuess>().unwrap(), InitialGuess::Random(Some(7)));
        assert!("sometimes".parse::<InitialGuess>().is_err());
    }

    #[test]
    fn validation() {
        let mut c = BenchConfig::new(Problem::Banded3, Method::Gmres);
        assert!(c.validate().is_ok());
        c.x0 = Some(InitialGuess::Pre);
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = BenchConfig::new(Problem::Example1 { order: 256 }, Method::PslrGmres);
        c.m = 6;
        assert!(c.validate().is_err());
        c.allow_large_m = true;
        assert!(c.validate().is_ok());
        assert_eq!(c.initial_guess(), InitialGuess::Pre);
    }
}
