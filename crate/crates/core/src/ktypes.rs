//! The K-type lattice: labels `(Ξ; f; j, ½+q, ½, …, ½, ε/2)`, their
//! multiplicities, sphere eigenvalues, and the six-neighbor diagrams.

use std::fmt;
use std::ops::{Mul, Neg};
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{q, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KTypeError {
    #[error("n must be even and ≥ 4")]
    BadDimension { n: u32 },
    #[error("invalid weight: {reason}")]
    InvalidWeight { reason: String },
}

/// A ±1 label (chirality Ξ or the sign ε of the last weight entry).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Minus, Sign::Plus];

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn rational(self) -> Rational {
        Rational::from_integer(self.value())
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_i64(v).ok_or_else(|| serde::de::Error::custom("expected ±1"))
    }
}

/// Spin(2) weight lattice for `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lattice {
    #[default]
    Half,
    #[serde(rename = "int")]
    Integer,
}

impl Lattice {
    pub fn contains(self, f: &Rational) -> bool {
        match self {
            Lattice::Integer => f.is_integer(),
            Lattice::Half => (f * 2).is_integer() && !f.is_integer(),
        }
    }

    /// Lattice points in `[lo, hi]`, ascending.
    pub fn points(self, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        let offset = match self {
            Lattice::Integer => Rational::zero(),
            Lattice::Half => Rational::half(),
        };
        let start = Rational::from_big((lo - &offset).floor(), 1.into()).expect("unit") + &offset;
        let mut out = Vec::new();
        let mut x = start;
        while &x <= hi {
            if &x >= lo {
                out.push(x.clone());
            }
            x += Rational::one();
        }
        out
    }
}

/// Dimension, half the operator order, and the f-lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    n: u32,
    r: Rational,
    lattice: Lattice,
}

impl Params {
    pub fn new(n: u32, r: Rational, lattice: Lattice) -> Result<Params, KTypeError> {
        if n < 4 || n % 2 != 0 {
            return Err(KTypeError::BadDimension { n });
        }
        Ok(Params { n, r, lattice })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `n` as a rational, for use in formulas.
    pub fn nr(&self) -> Rational {
        Rational::from(self.n)
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn with_r(&self, r: Rational) -> Params {
        Params { r, ..self.clone() }
    }

    /// Validated label; `make_ktype` in the module docs.
    pub fn ktype(
        &self,
        xi: Sign,
        f: Rational,
        j: Rational,
        q: u8,
        eps: Sign,
    ) -> Result<KType, KTypeError> {
        make_ktype(self, xi, f, j, q, eps)
    }
}

/// Lowest admissible `j` for second entry `½ + q`.
pub fn j_floor(q: u8) -> Rational {
    Rational::half() + Rational::from_integer(q.into())
}

pub fn make_ktype(
    params: &Params,
    xi: Sign,
    f: Rational,
    j: Rational,
    q: u8,
    eps: Sign,
) -> Result<KType, KTypeError> {
    if q > 1 {
        return Err(KTypeError::InvalidWeight { reason: format!("q = {q} is not 0 or 1") });
    }
    if !params.lattice.contains(&f) {
        return Err(KTypeError::InvalidWeight {
            reason: format!("f = {f} is not on the {:?} lattice", params.lattice),
        });
    }
    let floor = j_floor(q);
    if j < floor || !(&j - &floor).is_integer() {
        return Err(KTypeError::InvalidWeight {
            reason: format!("j = {j} is not in {floor} + N"),
        });
    }
    Ok(KType { xi, f, j, q, eps })
}

/// Highest weight `(f) ⊗ (j, ½+q, ½, …, ½, ε/2)` at chirality Ξ.
///
/// Ordering follows the field order (Ξ, f, j, q, ε).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KType {
    pub xi: Sign,
    pub f: Rational,
    pub j: Rational,
    pub q: u8,
    pub eps: Sign,
}

impl KType {
    pub fn multiplicity(&self) -> u8 {
        if self.q == 0 {
            2
        } else {
            1
        }
    }

    /// The product Ξε that enters the spectral function.
    pub fn xi_eps(&self) -> Sign {
        self.xi * self.eps
    }

    /// Sort key for the documented row order (Ξ, f, j, ε).
    pub fn order_key(&self) -> (Sign, Rational, Rational, u8, Sign) {
        (self.xi, self.f.clone(), self.j.clone(), self.q, self.eps)
    }

    /// `(f + j + (1-ε)/2) mod 2`: neighbors never leave this class.
    pub fn component(&self) -> Rational {
        let shift = if self.eps == Sign::Minus { Rational::one() } else { Rational::zero() };
        let x = &self.f + &self.j + shift;
        let turns = Rational::from_big((&x * Rational::half()).floor(), 1.into()).expect("unit");
        x - turns * 2
    }
}

impl fmt::Display for KType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(xi={}, f={}, j={}, q={}, eps={})",
            self.xi, self.f, self.j, self.q, self.eps
        )
    }
}

/// Sphere eigenvalues used by the transition formulas.
///
/// The default closed forms live in [`StandardSphere`]; an alternative
/// convention can be injected through [`crate::Model::with_sphere`].
pub trait SphereSpectrum: Send + Sync + fmt::Debug {
    /// Signed Dirac eigenvalue `J_a` on the spinor type `(j, ½, …, ½, ε/2)`.
    fn dirac(&self, n: u32, j: &Rational, eps: Sign) -> Rational;
    /// Eigenvalue of `T*T` on the twistor type with first entry `j`.
    fn twistor_tt(&self, n: u32, j: &Rational) -> Rational;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct StandardSphere;

impl SphereSpectrum for StandardSphere {
    fn dirac(&self, n: u32, j: &Rational, eps: Sign) -> Rational {
        eps.rational() * (j + q(n as i64 - 2, 2))
    }

    fn twistor_tt(&self, n: u32, j: &Rational) -> Rational {
        let n = n as i64;
        let big_j = j + q(n - 2, 2);
        q(n - 2, n - 1) * (big_j.square() - q((n - 1) * (n - 1), 4))
    }
}

pub fn default_sphere() -> Arc<dyn SphereSpectrum> {
    Arc::new(StandardSphere)
}

/// `J_a = ε(j + (n-2)/2)`.
pub fn dirac_eigenvalue(params: &Params, j: &Rational, eps: Sign) -> Rational {
    StandardSphere.dirac(params.n, j, eps)
}

/// `λ(T*T) = ((n-2)/(n-1))(J² - (n-1)²/4)` with `J = j + (n-2)/2`.
pub fn twistor_tt_eigenvalue(params: &Params, j: &Rational) -> Rational {
    StandardSphere.twistor_tt(params.n, j)
}

/// Row of the neighbor diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Row {
    /// `j + 1`, same ε.
    Top,
    /// same `j`, flipped ε.
    Middle,
    /// `j - 1`, same ε.
    Bottom,
}

impl Row {
    pub const ALL: [Row; 3] = [Row::Top, Row::Middle, Row::Bottom];

    pub fn dj(self) -> i64 {
        match self {
            Row::Top => 1,
            Row::Middle => 0,
            Row::Bottom => -1,
        }
    }

    pub fn opposite(self) -> Row {
        match self {
            Row::Top => Row::Bottom,
            Row::Middle => Row::Middle,
            Row::Bottom => Row::Top,
        }
    }
}

/// Column of the neighbor diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Column {
    /// `f - 1`
    Left,
    /// `f + 1`
    Right,
}

impl Column {
    pub const ALL: [Column; 2] = [Column::Left, Column::Right];

    pub fn df(self) -> i64 {
        match self {
            Column::Left => -1,
            Column::Right => 1,
        }
    }

    pub fn opposite(self) -> Column {
        match self {
            Column::Left => Column::Right,
            Column::Right => Column::Left,
        }
    }
}

/// Position `(dj, df)` in the 3×2 layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Direction {
    pub row: Row,
    pub column: Column,
}

impl Direction {
    pub fn new(row: Row, column: Column) -> Self {
        Direction { row, column }
    }

    /// Layout order: rows top to bottom, columns left to right.
    pub fn all() -> impl Iterator<Item = Direction> {
        Row::ALL
            .into_iter()
            .flat_map(|row| Column::ALL.into_iter().map(move |column| Direction { row, column }))
    }

    pub fn opposite(self) -> Direction {
        Direction { row: self.row.opposite(), column: self.column.opposite() }
    }

    pub fn label(self) -> String {
        format!(
            "{}-{}",
            match self.row {
                Row::Top => "top",
                Row::Middle => "middle",
                Row::Bottom => "bottom",
            },
            match self.column {
                Column::Left => "left",
                Column::Right => "right",
            }
        )
    }

    /// Move from `center` in this direction, without validation.
    pub fn step(self, center: &KType) -> (Rational, Rational, Sign) {
        let f = &center.f + Rational::from_integer(self.column.df());
        let j = &center.j + Rational::from_integer(self.row.dj());
        let eps = if self.row == Row::Middle { -center.eps } else { center.eps };
        (f, j, eps)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Neighbor {
    pub direction: Direction,
    pub ktype: KType,
}

/// The neighbors present around a center plus the directions that fall off
/// the lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Neighborhood {
    pub center: KType,
    pub present: Vec<Neighbor>,
    pub absent: Vec<Direction>,
}

impl Neighborhood {
    pub fn get(&self, direction: Direction) -> Option<&KType> {
        self.present.iter().find(|n| n.direction == direction).map(|n| &n.ktype)
    }
}

pub fn neighbors(center: &KType) -> Neighborhood {
    let mut present = Vec::new();
    let mut absent = Vec::new();
    let floor = j_floor(center.q);
    for direction in Direction::all() {
        let (f, j, eps) = direction.step(center);
        if j < floor {
            absent.push(direction);
        } else {
            present.push(Neighbor {
                direction,
                ktype: KType { xi: center.xi, f, j, q: center.q, eps },
            });
        }
    }
    Neighborhood { center: center.clone(), present, absent }
}

/// Corners of the interface diagram around a multiplicity-2 center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterfaceSquare {
    /// `(f; j, ½, …)`
    pub alpha1: KType,
    /// `(f+1; j+1, ½, …)`
    pub alpha2: KType,
    /// `(f+1; j, 3/2, …)`
    pub beta1: KType,
    /// `(f; j+1, 3/2, …)`
    pub beta2: KType,
}

pub fn interface_square(params: &Params, center: &KType) -> Result<InterfaceSquare, KTypeError> {
    if center.q != 0 {
        return Err(KTypeError::InvalidWeight {
            reason: "interface square needs a multiplicity-2 center".into(),
        });
    }
    let one = Rational::one();
    let c = center;
    Ok(InterfaceSquare {
        alpha1: c.clone(),
        alpha2: make_ktype(params, c.xi, &c.f + &one, &c.j + &one, 0, c.eps)?,
        beta1: make_ktype(params, c.xi, &c.f + &one, c.j.clone(), 1, c.eps)?,
        beta2: make_ktype(params, c.xi, c.f.clone(), &c.j + &one, 1, c.eps)?,
    })
}
