//! Candidate encoding: gradual items, patterns, gradual bit vectors and the
//! integer search spaces built on top of them.
//!
//! A gradual bit vector over `m` attributes has `2m` bits. Bit `2i` (counting
//! from the most significant end) marks attribute `i` increasing and bit
//! `2i + 1` marks it decreasing, so attribute 0 owns the two most significant
//! bits. Read as a big-endian binary number the vector is the candidate's
//! integer position; `101000` over `{age, sessions, marks}` is
//! `{age+, sessions+}` and also the integer 40.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{FromPrimitive, One, Zero};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest attribute count for which candidates are enumerated exhaustively.
pub const ENUMERATION_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }

    fn symbol(self) -> char {
        match self {
            Direction::Up => '+',
            Direction::Down => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradualItem {
    pub attribute: usize,
    pub direction: Direction,
}

impl GradualItem {
    pub fn new(attribute: usize, direction: Direction) -> Self {
        Self {
            attribute,
            direction,
        }
    }
}

/// A set of at least two gradual items over distinct attributes, ordered by
/// attribute index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<GradualItem>", into = "Vec<GradualItem>")]
pub struct GradualPattern {
    items: Vec<GradualItem>,
}

impl GradualPattern {
    pub fn new(mut items: Vec<GradualItem>) -> Result<Self> {
        if items.len() < 2 {
            return Err(Error::Pattern(format!(
                "a pattern needs at least 2 items, got {}",
                items.len()
            )));
        }
        items.sort();
        if let Some(w) = items.windows(2).find(|w| w[0].attribute == w[1].attribute) {
            return Err(Error::Pattern(format!(
                "conflicting items on attribute {}",
                w[0].attribute
            )));
        }
        Ok(Self { items })
    }

    /// Shorthand for tests and examples: `[(0, Up), (1, Down)]`.
    pub fn from_pairs(pairs: &[(usize, Direction)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(a, d)| GradualItem::new(a, d))
                .collect(),
        )
    }

    pub fn items(&self) -> &[GradualItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The same attributes with every direction reversed.
    pub fn complement(&self) -> Self {
        Self {
            items: self
                .items
                .iter()
                .map(|it| GradualItem::new(it.attribute, it.direction.flipped()))
                .collect(),
        }
    }

    pub fn to_bits(&self, m: usize) -> Result<BitVector> {
        let mut bits = vec![false; 2 * m];
        for it in &self.items {
            if it.attribute >= m {
                return Err(Error::AttributeOutOfRange {
                    index: it.attribute,
                    m,
                });
            }
            bits[bit_index(it.attribute, it.direction)] = true;
        }
        Ok(BitVector { bits })
    }

    /// Integer position of this pattern for an `m`-attribute dataset.
    pub fn candidate(&self, m: usize) -> Result<BigUint> {
        Ok(encode(&self.to_bits(m)?))
    }

    /// Renders as `{age+, sessions-}` using the given attribute names.
    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .items
            .iter()
            .map(|it| {
                let name = names
                    .get(it.attribute)
                    .cloned()
                    .unwrap_or_else(|| it.attribute.to_string());
                format!("{name}{}", it.direction.symbol())
            })
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for GradualPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

impl TryFrom<Vec<GradualItem>> for GradualPattern {
    type Error = Error;

    fn try_from(items: Vec<GradualItem>) -> Result<Self> {
        Self::new(items)
    }
}

impl From<GradualPattern> for Vec<GradualItem> {
    fn from(p: GradualPattern) -> Self {
        p.items
    }
}

fn bit_index(attribute: usize, direction: Direction) -> usize {
    match direction {
        Direction::Up => 2 * attribute,
        Direction::Down => 2 * attribute + 1,
    }
}

/// Gradual bit vector; `bits[0]` is the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    bits: Vec<bool>,
}

impl BitVector {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.len() < 4 || !bits.len().is_multiple_of(2) {
            return Err(Error::BitVector(format!(
                "length must be an even number >= 4, got {}",
                bits.len()
            )));
        }
        Ok(Self { bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Attribute count, half the bit length.
    pub fn attributes(&self) -> usize {
        self.bits.len() / 2
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::BitVector(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Integer whose big-endian binary expansion is `b`.
pub fn encode(b: &BitVector) -> BigUint {
    let mut x = BigUint::zero();
    for &bit in &b.bits {
        x <<= 1u32;
        if bit {
            x += 1u32;
        }
    }
    x
}

/// Why a bit vector does not describe a gradual pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Invalidity {
    /// Both directions set for these attributes.
    Conflict { attributes: Vec<usize> },
    /// Fewer than two items set.
    TooFewItems { items: usize },
}

/// Outcome of decoding a candidate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Decoded {
    Pattern(GradualPattern),
    Invalid(Invalidity),
}

impl Decoded {
    pub fn pattern(&self) -> Option<&GradualPattern> {
        match self {
            Decoded::Pattern(p) => Some(p),
            Decoded::Invalid(_) => None,
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, Decoded::Pattern(_))
    }
}

fn decode_states<F: Fn(usize) -> bool>(m: usize, bit: F) -> Decoded {
    let mut items = Vec::new();
    let mut conflicts = Vec::new();
    for a in 0..m {
        match (bit(2 * a), bit(2 * a + 1)) {
            (true, true) => conflicts.push(a),
            (true, false) => items.push(GradualItem::new(a, Direction::Up)),
            (false, true) => items.push(GradualItem::new(a, Direction::Down)),
            (false, false) => {}
        }
    }
    if !conflicts.is_empty() {
        Decoded::Invalid(Invalidity::Conflict {
            attributes: conflicts,
        })
    } else if items.len() < 2 {
        Decoded::Invalid(Invalidity::TooFewItems { items: items.len() })
    } else {
        Decoded::Pattern(GradualPattern { items })
    }
}

/// Interprets a bit vector as a pattern, or reports why it is not one.
pub fn to_pattern(b: &BitVector) -> Decoded {
    decode_states(b.attributes(), |j| b.bits[j])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    /// `[5, sum of 2^(2i-1) for i in 1..=m]`
    Numeric,
    /// `[0, 2^(2m) - 1]`, every bit pattern.
    Bitmap,
}

impl SpaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Numeric => "numeric",
            SpaceKind::Bitmap => "bitmap",
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for SpaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "numeric" => Ok(SpaceKind::Numeric),
            "bitmap" => Ok(SpaceKind::Bitmap),
            other => Err(Error::UnknownSpace(other.to_owned())),
        }
    }
}

/// Inclusive integer interval of candidate positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpace {
    kind: SpaceKind,
    m: usize,
    lower: BigUint,
    upper: BigUint,
}

impl SearchSpace {
    pub fn build(m: usize, kind: SpaceKind) -> Result<Self> {
        if m < 2 {
            return Err(Error::AttributeCount(m));
        }
        let (lower, upper) = match kind {
            // the all-up vector 1010...10
            SpaceKind::Numeric => (
                BigUint::from(5u32),
                (1..=m).fold(BigUint::zero(), |acc, i| acc + (BigUint::one() << (2 * i - 1))),
            ),
            SpaceKind::Bitmap => (BigUint::zero(), (BigUint::one() << (2 * m)) - 1u32),
        };
        Ok(Self {
            kind,
            m,
            lower,
            upper,
        })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    /// Attribute count.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lower(&self) -> &BigUint {
        &self.lower
    }

    pub fn upper(&self) -> &BigUint {
        &self.upper
    }

    /// `upper - lower`
    pub fn width(&self) -> BigUint {
        &self.upper - &self.lower
    }

    /// Number of integer positions, bounds included.
    pub fn size(&self) -> BigUint {
        self.width() + 1u32
    }

    pub fn contains(&self, x: &BigUint) -> bool {
        *x >= self.lower && *x <= self.upper
    }

    fn check(&self, x: &BigUint) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                candidate: x.clone(),
                lower: self.lower.clone(),
                upper: self.upper.clone(),
            })
        }
    }

    pub fn decode(&self, x: &BigUint) -> Result<BitVector> {
        self.check(x)?;
        let len = 2 * self.m;
        let bits = (0..len).map(|j| x.bit((len - 1 - j) as u64)).collect();
        Ok(BitVector { bits })
    }

    /// Decodes straight from the integer without materializing the bit vector.
    pub fn to_pattern(&self, x: &BigUint) -> Result<Decoded> {
        self.check(x)?;
        let len = 2 * self.m;
        Ok(decode_states(self.m, |j| x.bit((len - 1 - j) as u64)))
    }

    pub fn is_valid(&self, x: &BigUint) -> Result<bool> {
        Ok(self.to_pattern(x)?.is_valid())
    }

    /// `3^m - 2m - 1`: each attribute is absent, up or down, minus the empty
    /// and single-item states.
    pub fn valid_count(&self) -> BigUint {
        BigUint::from(3u32).pow(self.m as u32) - BigUint::from(2 * self.m + 1)
    }

    /// Every valid candidate in ascending order.
    pub fn enumerate_valid(&self) -> Result<Vec<BigUint>> {
        self.enumerate_valid_with_limit(ENUMERATION_LIMIT)
    }

    pub fn enumerate_valid_with_limit(&self, limit: usize) -> Result<Vec<BigUint>> {
        if self.m > limit || self.m > 31 {
            return Err(Error::ResourceLimit {
                m: self.m,
                limit: limit.min(31),
            });
        }
        // Field values 00 < 01 < 10 (absent < down < up) form a base-3
        // odometer; with attribute 0 most significant it runs in ascending
        // integer order and never produces the conflicting field 11.
        let m = self.m;
        let mut states = vec![0u8; m];
        let mut out = Vec::new();
        loop {
            if states.iter().filter(|&&s| s != 0).count() >= 2 {
                let v = states
                    .iter()
                    .fold(0u64, |acc, &s| (acc << 2) | u64::from(s));
                out.push(BigUint::from(v));
            }
            let mut pos = m;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                states[pos] += 1;
                if states[pos] < 3 {
                    break;
                }
                states[pos] = 0;
            }
        }
    }

    /// Uniform draw from the whole interval.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> BigUint {
        &self.lower + uniform_below_or_equal(&self.width(), rng)
    }

    /// Clamps a signed value into the interval.
    pub fn clamp(&self, x: &BigInt) -> BigUint {
        match x.sign() {
            Sign::Minus => self.lower.clone(),
            _ => {
                let mag = x.magnitude();
                if *mag < self.lower {
                    self.lower.clone()
                } else if *mag > self.upper {
                    self.upper.clone()
                } else {
                    mag.clone()
                }
            }
        }
    }

    /// `clamp(x + round(delta))`, rounding half up.
    pub fn offset(&self, x: &BigUint, delta: f64) -> BigUint {
        let step = BigInt::from_f64((delta + 0.5).floor()).unwrap_or_else(|| {
            // non-finite steps saturate at the far bound
            if delta > 0.0 {
                BigInt::from(self.size())
            } else {
                -BigInt::from(self.size())
            }
        });
        self.clamp(&(BigInt::from(x.clone()) + step))
    }
}

/// Uniform integer in `[0, bound]` by rejection sampling on random bits.
pub(crate) fn uniform_below_or_equal<R: RngCore + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    let bits = bound.bits();
    if bits == 0 {
        return BigUint::zero();
    }
    let words = bits.div_ceil(32) as usize;
    let top_bits = bits - 32 * (words as u64 - 1);
    let top_mask = if top_bits == 32 {
        u32::MAX
    } else {
        (1u32 << top_bits) - 1
    };
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        digits[words - 1] &= top_mask;
        let v = BigUint::new(digits);
        if v <= *bound {
            return v;
        }
    }
}
