//! Ring models of projective spaces, the octonionic plane, and spaces read
//! from text files.

mod format;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::Prime;
use crate::manifold::{structure_report, truncated_polynomial, IntegralCharData, ObstructionReport, PoincareRing};
use crate::module::{FiniteModule, IsoOptions};
use crate::steenrod::Letter;

pub use format::{load, load_str, save_module, save_ring, Loaded};

/// Environment variable overriding the bundled data directory.
pub const DATA_DIR_ENV: &str = "PSDUAL_DATA_DIR";

/// Directory holding the bundled data files.
pub fn data_dir() -> PathBuf {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"),
    }
}

/// `H^*(RP^n; F_2) = F_2[x]/(x^(n+1))`, `|x| = 1`, `Sq^i x^j = C(j,i) x^(i+j)`.
pub fn rp(n: u32) -> Result<PoincareRing> {
    let two = Prime::TWO;
    truncated_polynomial(format!("RP^{n}"), two, 1, n as i32, |l, j| match l {
        Letter::Sq(i) => two.binomial(j as i64, i as i64),
        _ => 0,
    })
}

/// `H^*(CP^n; F_p)`, `|x| = 2`.
pub fn cp(n: u32, p: Prime) -> Result<PoincareRing> {
    truncated_polynomial(format!("CP^{n}"), p, 2, n as i32, |l, j| match l {
        Letter::Sq(i) if i % 2 == 0 => p.binomial(j as i64, (i / 2) as i64),
        Letter::P(i) => p.binomial(j as i64, i as i64),
        _ => 0,
    })
}

/// `H^*(HP^n; F_p)`, `|x| = 4`. At odd primes `x = -t^2` with `t` the
/// degree-2 class of a maximal torus, so
/// `P^m x^j = C(2j, m) (-1)^(m(p-1)/2) x^(j + m(p-1)/2)`.
pub fn hp(n: u32, p: Prime) -> Result<PoincareRing> {
    let half = (p.value() as i64 - 1) / 2;
    truncated_polynomial(format!("HP^{n}"), p, 4, n as i32, |l, j| match l {
        Letter::Sq(i) if i % 4 == 0 => p.binomial(j as i64, (i / 4) as i64),
        Letter::P(m) => p.mul(p.binomial(2 * j as i64, m as i64), p.sign(m as i64 * half)),
        _ => 0,
    })
}

/// `H^*(F_4/Spin(9); F_2) = F_2[x]/(x^3)`, `|x| = 8`, `Sq^8 x = x^2`.
pub fn op2() -> Result<PoincareRing> {
    let two = Prime::TWO;
    truncated_polynomial("F_4/Spin(9)", two, 8, 2, |l, j| match l {
        Letter::Sq(i) if i % 8 == 0 => two.binomial(j as i64, (i / 8) as i64),
        _ => 0,
    })
}

/// The test corpus: `RP^n` for `n <= 24`, `CP^n` for `n <= 12` and `HP^n`
/// for `n <= 8` at `p = 2, 3, 5`, and `F_4/Spin(9)`.
pub fn corpus() -> Result<Vec<PoincareRing>> {
    let mut out = Vec::new();
    for n in 1..=24 {
        out.push(rp(n)?);
    }
    for p in [Prime::TWO, Prime::THREE, Prime::FIVE] {
        for n in 1..=12 {
            out.push(cp(n, p)?);
        }
        for n in 1..=8 {
            out.push(hp(n, p)?);
        }
    }
    out.push(op2()?);
    Ok(out)
}

/// The rows of the structure table that follow from the text alone.
pub const TABLE1_SPACES: [&str; 11] =
    ["rp:5", "rp:11", "rp:23", "cp:2", "cp:3", "cp:5", "cp:11", "hp:2", "hp:3", "hp:7", "op2"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Rp,
    Cp,
    Hp,
    Op2,
    File(PathBuf),
}

/// A space named on the command line: `rp:11`, `cp:11`, `hp:7`, `op2`,
/// `file:<path>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceSpec {
    pub family: Family,
    pub n: u32,
}

impl FromStr for SpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(SpaceSpec { family: Family::File(PathBuf::from(path)), n: 0 });
        }
        let lower = s.to_ascii_lowercase();
        if lower == "op2" || lower == "f4/spin9" {
            return Ok(SpaceSpec { family: Family::Op2, n: 2 });
        }
        let (fam, n) = lower.split_once(':').ok_or_else(|| Error::UnknownSpace(s.to_string()))?;
        let n: u32 = n.parse().map_err(|_| Error::UnknownSpace(s.to_string()))?;
        if n == 0 {
            return Err(Error::UnknownSpace(format!("{s}: dimension parameter must be positive")));
        }
        let family = match fam {
            "rp" => Family::Rp,
            "cp" => Family::Cp,
            "hp" => Family::Hp,
            _ => return Err(Error::UnknownSpace(s.to_string())),
        };
        Ok(SpaceSpec { family, n })
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Rp => write!(f, "rp:{}", self.n),
            Family::Cp => write!(f, "cp:{}", self.n),
            Family::Hp => write!(f, "hp:{}", self.n),
            Family::Op2 => f.write_str("op2"),
            Family::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl SpaceSpec {
    pub fn supports(&self, p: Prime) -> bool {
        match self.family {
            Family::Rp | Family::Op2 => p.is_two(),
            Family::Cp | Family::Hp => true,
            Family::File(_) => true,
        }
    }

    pub fn ring(&self, p: Prime) -> Result<PoincareRing> {
        match &self.family {
            Family::Rp if p.is_two() => rp(self.n),
            Family::Cp => cp(self.n, p),
            Family::Hp => hp(self.n, p),
            Family::Op2 if p.is_two() => op2(),
            Family::File(path) => match load(path)? {
                Loaded::Ring(r) if r.prime() == p => Ok(r),
                Loaded::Ring(r) => Err(Error::PrimeMismatch(r.prime().value(), p.value())),
                Loaded::Module(_) => Err(Error::InvalidRing(format!("{} holds a module, not a ring", path.display()))),
            },
            _ => Err(Error::UnsupportedPrime { family: self.to_string(), prime: p.value() }),
        }
    }

    pub fn integral(&self) -> Option<IntegralCharData> {
        match self.family {
            Family::Cp => Some(IntegralCharData::cp(self.n)),
            Family::Hp => Some(IntegralCharData::hp(self.n)),
            _ => None,
        }
    }

    /// Build the ring models at each supported prime in `primes`.
    pub fn build(&self, primes: &[Prime]) -> Result<Space> {
        if let Family::File(path) = &self.family {
            return Space::from_file(path);
        }
        let mut rings = BTreeMap::new();
        let mut skipped = Vec::new();
        for &p in primes {
            if self.supports(p) {
                rings.insert(p.value(), self.ring(p)?);
            } else {
                skipped.push(p.value());
            }
        }
        let name = match self.family {
            Family::Rp => format!("RP^{}", self.n),
            Family::Cp => format!("CP^{}", self.n),
            Family::Hp => format!("HP^{}", self.n),
            _ => "F_4/Spin(9)".to_string(),
        };
        Ok(Space { name, rings, module: None, integral: self.integral(), skipped })
    }
}

/// Everything known about one space.
#[derive(Clone, Debug)]
pub struct Space {
    pub name: String,
    /// Ring models keyed by prime.
    pub rings: BTreeMap<u32, PoincareRing>,
    /// A bare module, for files without ring structure.
    pub module: Option<FiniteModule>,
    pub integral: Option<IntegralCharData>,
    /// Requested primes with no model for this family.
    pub skipped: Vec<u32>,
}

impl Space {
    pub fn from_file(path: &Path) -> Result<Space> {
        let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        let mut space = Space { name, rings: BTreeMap::new(), module: None, integral: None, skipped: Vec::new() };
        match load(path)? {
            Loaded::Ring(r) => {
                space.name = r.name().to_string();
                space.rings.insert(r.prime().value(), r);
            }
            Loaded::Module(m) => space.module = Some(m),
        }
        Ok(space)
    }

    pub fn ring(&self, p: u32) -> Option<&PoincareRing> {
        self.rings.get(&p)
    }

    pub fn report(&self, opts: &IsoOptions) -> Result<ObstructionReport> {
        let rings: Vec<PoincareRing> = self.rings.values().cloned().collect();
        if rings.is_empty() {
            return Err(Error::InvalidRing(format!("{}: no ring model at the requested primes", self.name)));
        }
        structure_report(&self.name, &rings, self.integral.as_ref(), opts)
    }
}
