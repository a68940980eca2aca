//! Cartan data and weight systems of the simple Lie algebras.
//!
//! Conventions: row `i` of the Cartan matrix holds the Dynkin coordinates of
//! the simple root `αⁱ`, i.e. `A_ji = 2 αʲ·αⁱ / (αⁱ)²`. For `SO(2n+1)` the
//! last simple root is short, for `Sp(2n)` the last one is long, for `F4`
//! the first two are short and for `G2` the first one is short.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactnum::Rational;
use crate::linalg::{invert_matrix, Matrix};
use crate::{par, Error, Result};

/// A simple Lie algebra, named by Cartan family and rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LieAlgebra {
    A(u32),
    B(u32),
    C(u32),
    D(u32),
    E6,
    E7,
    E8,
    F4,
    G2,
}

/// A weight together with its position in the weight system of an irrep.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightRecord {
    /// Number of simple roots subtracted from the highest weight.
    pub level: u32,
    /// How often each simple root was subtracted.
    pub descent: Vec<i32>,
    pub dynkin: Vec<i32>,
    /// Multiplicity of the weight; 0 while not yet computed.
    pub degeneracy: u32,
    /// Dynkin label with respect to the lowest root.
    pub lowest_root_label: i32,
}

const E6_ROOTS: &str = "100000 011100 111111 010000 001110 012101 001000 001101 112101 \
    000100 111100 012111 000010 011110 112111 000001 001111 012211 110000 111110 112211 \
    011000 011001 122101 001100 111001 122111 000110 011101 122211 001001 111101 123211 \
    111000 011111 123212";

const E7_ROOTS: &str = "1000000 0001110 0122111 0100000 0011110 1122111 0010000 0111110 \
    0122211 0001000 0011111 1122211 0000100 1111110 1221001 0000010 0110001 1221101 \
    0000001 1110001 1221111 1100000 0111001 1222101 0110000 1111001 1222111 0011000 \
    0111101 1222211 0010001 1111101 1232101 1110000 0111111 1232111 0001100 1111111 \
    1232211 0111000 0121001 1233211 0011001 1121001 1232102 1111000 0121101 1232112 \
    0000110 1121101 1232212 0011100 0121111 1233212 0111100 1121111 1243212 0011101 \
    0122101 1343212 1111100 1122101 2343212";

const E8_ROOTS: &str = "10000000 01111101 12332101 01000000 11111101 12332111 00100000 \
    01111111 12332211 00010000 11111111 12333211 00001000 01210001 12321002 00000100 \
    11210001 12321102 00000010 01211001 12321112 00000001 11211001 12322102 11000000 \
    01211101 12322112 01100000 11211101 12322212 00110000 01211111 12332102 00100001 \
    11211111 12332112 11100000 01221001 12332212 00011000 11221001 12333212 01110000 \
    01221101 12432102 00110001 11221101 12432112 11110000 01221111 12432212 00001100 \
    11221111 12433212 00111000 01222101 12443212 01111000 11222101 13432102 00111001 \
    01222111 13432112 11111000 11222111 13432212 00000110 01222211 13433212 00011100 \
    11222211 13443212 00111100 12210001 13543212 01111100 12211001 13543213 00111101 \
    12211101 23432102 11111100 12211111 23432112 00001110 12221001 23432212 00011110 \
    12221101 23433212 00111110 12221111 23443212 01111110 12222101 23543212 00111111 \
    12222111 23543213 11111110 12222211 24543212 01100001 12321001 24543213 11100001 \
    12321101 24643213 01110001 12321111 24653213 11110001 12322101 24654213 01111001 \
    12322111 24654313 11111001 12322211 24654323";

// Simple-root coefficients listed with the long roots first; they are
// reversed on load to match the short-first numbering used here.
const F4_ROOTS_LONG_FIRST: &str = "1000 0011 0121 1222 0100 1110 1121 1231 0010 0111 \
    1220 1232 0001 0120 0122 1242 1100 1111 1122 1342 0110 1120 1221 2342";

const G2_ROOTS_LONG_FIRST: &str = "10 01 11 12 13 23";

fn parse_table(table: &str, reverse: bool) -> Vec<Vec<i32>> {
    table
        .split_whitespace()
        .map(|s| {
            let mut v: Vec<i32> = s.bytes().map(|b| (b - b'0') as i32).collect();
            if reverse {
                v.reverse();
            }
            v
        })
        .collect()
}

/// `Σ_{u=j}^{k} αᵘ` (1-based, inclusive) added into `v` with multiplicity `m`.
fn add_range(v: &mut [i32], j: usize, k: usize, m: i32) {
    for u in j..=k {
        v[u - 1] += m;
    }
}

impl LieAlgebra {
    /// Builds and validates an algebra from a family letter and rank.
    pub fn new(family: char, rank: u32) -> Result<Self> {
        let la = match family.to_ascii_uppercase() {
            'A' => LieAlgebra::A(rank),
            'B' => LieAlgebra::B(rank),
            'C' => LieAlgebra::C(rank),
            'D' => LieAlgebra::D(rank),
            'E' => match rank {
                6 => LieAlgebra::E6,
                7 => LieAlgebra::E7,
                8 => LieAlgebra::E8,
                _ => return Err(Error::InvalidArgument(format!("no algebra E{rank}"))),
            },
            'F' if rank == 4 => LieAlgebra::F4,
            'G' if rank == 2 => LieAlgebra::G2,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "no algebra {family}{rank}"
                )))
            }
        };
        la.validate()?;
        Ok(la)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            LieAlgebra::A(n) => n >= 1,
            LieAlgebra::B(n) | LieAlgebra::C(n) => n >= 2,
            LieAlgebra::D(n) => n >= 3,
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("rank out of range for {self}")))
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            LieAlgebra::A(n) | LieAlgebra::B(n) | LieAlgebra::C(n) | LieAlgebra::D(n) => {
                n as usize
            }
            LieAlgebra::E6 => 6,
            LieAlgebra::E7 => 7,
            LieAlgebra::E8 => 8,
            LieAlgebra::F4 => 4,
            LieAlgebra::G2 => 2,
        }
    }

    /// Physics name: `SU(n+1)`, `SO(2n+1)`, `Sp(2n)`, `SO(2n)`, `E6`, ...
    pub fn name(&self) -> String {
        match *self {
            LieAlgebra::A(n) => format!("SU({})", n + 1),
            LieAlgebra::B(n) => format!("SO({})", 2 * n + 1),
            LieAlgebra::C(n) => format!("Sp({})", 2 * n),
            LieAlgebra::D(n) => format!("SO({})", 2 * n),
            other => other.to_string(),
        }
    }

    pub fn cartan(&self) -> Vec<Vec<i32>> {
        let n = self.rank();
        let chain = |n: usize| -> Vec<Vec<i32>> {
            let mut a = vec![vec![0; n]; n];
            for i in 0..n {
                a[i][i] = 2;
                if i + 1 < n {
                    a[i][i + 1] = -1;
                    a[i + 1][i] = -1;
                }
            }
            a
        };
        let mut a = chain(n);
        match *self {
            LieAlgebra::A(_) => {}
            LieAlgebra::B(_) => a[n - 2][n - 1] = -2,
            LieAlgebra::C(_) => a[n - 1][n - 2] = -2,
            LieAlgebra::D(_) => {
                a[n - 2][n - 1] = 0;
                a[n - 1][n - 2] = 0;
                a[n - 3][n - 1] = -1;
                a[n - 1][n - 3] = -1;
            }
            LieAlgebra::E6 | LieAlgebra::E7 | LieAlgebra::E8 => {
                // chain 1..n-1 with node n attached to node 3
                a[n - 2][n - 1] = 0;
                a[n - 1][n - 2] = 0;
                a[2][n - 1] = -1;
                a[n - 1][2] = -1;
            }
            LieAlgebra::F4 => a[2][1] = -2,
            LieAlgebra::G2 => a[1][0] = -3,
        }
        a
    }

    /// Squared lengths of the simple roots in units of the shortest one.
    pub fn root_weights(&self) -> Vec<i32> {
        let n = self.rank();
        match *self {
            LieAlgebra::B(_) => (0..n).map(|j| if j + 1 < n { 2 } else { 1 }).collect(),
            LieAlgebra::C(_) => (0..n).map(|j| if j + 1 < n { 1 } else { 2 }).collect(),
            LieAlgebra::F4 => vec![1, 1, 2, 2],
            LieAlgebra::G2 => vec![1, 3],
            _ => vec![1; n],
        }
    }

    /// Positive roots as coefficients of the simple roots.
    pub fn positive_roots(&self) -> Vec<Vec<i32>> {
        let n = self.rank();
        let root = |parts: &[(usize, usize, i32)]| {
            let mut v = vec![0; n];
            for &(j, k, m) in parts {
                add_range(&mut v, j, k, m);
            }
            v
        };
        let mut out = Vec::new();
        match *self {
            LieAlgebra::A(_) => {
                for j in 1..=n {
                    for k in j..=n {
                        out.push(root(&[(j, k, 1)]));
                    }
                }
            }
            LieAlgebra::B(_) => {
                for j in 1..=n {
                    out.push(root(&[(j, n, 1)]));
                }
                for j in 1..=n {
                    for k in j + 1..=n {
                        out.push(root(&[(j, k - 1, 1), (k, n, 2)]));
                        out.push(root(&[(j, k - 1, 1)]));
                    }
                }
            }
            LieAlgebra::C(_) => {
                for j in 1..=n {
                    for k in j + 1..=n {
                        out.push(root(&[(j, k - 1, 1)]));
                    }
                }
                for j in 1..n {
                    for k in j + 1..n {
                        out.push(root(&[(j, k - 1, 1), (k, n - 1, 2), (n, n, 1)]));
                    }
                    out.push(root(&[(j, n - 1, 1), (n, n, 1)]));
                    out.push(root(&[(j, n - 1, 2), (n, n, 1)]));
                }
                out.push(root(&[(n, n, 1)]));
            }
            LieAlgebra::D(_) => {
                for j in 1..=n - 2 {
                    for k in j + 1..=n - 2 {
                        out.push(root(&[(j, k - 1, 1), (k, n - 2, 2), (n - 1, n, 1)]));
                        out.push(root(&[(j, k - 1, 1)]));
                    }
                    out.push(root(&[(j, n - 2, 1), (n - 1, n, 1)]));
                    out.push(root(&[(j, n - 2, 1), (n - 1, n - 1, 1)]));
                    out.push(root(&[(j, n - 2, 1), (n, n, 1)]));
                    out.push(root(&[(j, n - 2, 1)]));
                }
                out.push(root(&[(n - 1, n - 1, 1)]));
                out.push(root(&[(n, n, 1)]));
            }
            LieAlgebra::E6 => out = parse_table(E6_ROOTS, false),
            LieAlgebra::E7 => out = parse_table(E7_ROOTS, false),
            LieAlgebra::E8 => out = parse_table(E8_ROOTS, false),
            LieAlgebra::F4 => out = parse_table(F4_ROOTS_LONG_FIRST, true),
            LieAlgebra::G2 => out = parse_table(G2_ROOTS_LONG_FIRST, true),
        }
        out
    }

    /// Dynkin coordinates of `Σ kᵢ αⁱ`.
    pub fn dynkin_of_root(&self, k: &[i32]) -> Vec<i32> {
        let a = self.cartan();
        let n = self.rank();
        (0..n)
            .map(|j| (0..n).map(|i| k[i] * a[i][j]).sum())
            .collect()
    }

    /// The highest root, as simple-root coefficients.
    pub fn highest_root(&self) -> Vec<i32> {
        self.positive_roots()
            .into_iter()
            .max_by_key(|r| r.iter().sum::<i32>())
            .expect("algebra has positive roots")
    }

    /// Highest weight of the adjoint irrep.
    pub fn adjoint_hw(&self) -> Vec<i32> {
        self.dynkin_of_root(&self.highest_root())
    }

    /// Dynkin label of `w` with respect to the lowest root `α⁰ = -θ`.
    pub fn lowest_root_label(&self, w: &[i32]) -> i32 {
        let theta = self.highest_root();
        let om = self.root_weights();
        let long = *om.iter().max().unwrap();
        let s: i32 = (0..self.rank()).map(|i| theta[i] * om[i] * w[i]).sum();
        debug_assert_eq!(s % long, 0);
        -s / long
    }

    /// `R` with `R·Λ` the level of the lowest weight of the irrep `Λ`.
    pub fn level_vector(&self) -> Vec<i64> {
        let a = Matrix::from_ints(
            &self
                .cartan()
                .iter()
                .map(|r| r.iter().map(|&x| x as i64).collect())
                .collect::<Vec<_>>(),
        )
        .expect("square Cartan matrix");
        let inv = invert_matrix(&a).expect("Cartan matrix is invertible");
        (0..self.rank())
            .map(|i| {
                let mut s = Rational::zero();
                for j in 0..self.rank() {
                    s = &s + &inv[(i, j)].as_rational().expect("rational inverse");
                }
                let s = s.mul_u64(2);
                s.as_small()
                    .filter(|&(_, d)| d == 1)
                    .map(|(n, _)| n)
                    .expect("integral level vector")
            })
            .collect()
    }

    fn check_hw(&self, hw: &[i32]) -> Result<()> {
        if hw.len() != self.rank() {
            return Err(Error::InvalidArgument(format!(
                "{} needs {} Dynkin labels, got {}",
                self.name(),
                self.rank(),
                hw.len()
            )));
        }
        if hw.iter().any(|&x| x < 0) {
            return Err(Error::InvalidArgument(
                "highest weight labels must be non-negative".into(),
            ));
        }
        Ok(())
    }

    /// Dimension of the irrep with highest weight `hw`.
    pub fn weyl_dim(&self, hw: &[i32]) -> Result<u64> {
        self.check_hw(hw)?;
        let om = self.root_weights();
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for k in self.positive_roots() {
            let mut a = 0i64;
            let mut b = 0i64;
            for j in 0..self.rank() {
                let kw = (k[j] * om[j]) as i64;
                a += (hw[j] as i64 + 1) * kw;
                b += kw;
            }
            num *= a;
            den *= b;
            let g = num.gcd(&den);
            num /= &g;
            den /= &g;
        }
        if !den.is_one() {
            return Err(Error::Inconsistent(format!(
                "Weyl dimension of {hw:?} is not integral"
            )));
        }
        num.to_u64()
            .ok_or_else(|| Error::InvalidArgument("dimension exceeds u64".into()))
    }

    /// All weights of the irrep `hw`, each once, ordered by level and then by
    /// descent vector. Degeneracies are left at 0.
    pub fn complete_descent(&self, hw: &[i32]) -> Result<Vec<WeightRecord>> {
        self.check_hw(hw)?;
        let n = self.rank();
        let a = self.cartan();
        let mut index: HashMap<Vec<i32>, usize> = HashMap::new();
        let mut out = vec![WeightRecord {
            level: 0,
            descent: vec![0; n],
            dynkin: hw.to_vec(),
            degeneracy: 0,
            lowest_root_label: self.lowest_root_label(hw),
        }];
        index.insert(hw.to_vec(), 0);
        let mut start = 0;
        let mut level = 0;
        while start < out.len() {
            let end = out.len();
            let mut next: Vec<WeightRecord> = Vec::new();
            let mut seen: HashMap<Vec<i32>, ()> = HashMap::new();
            for w in &out[start..end] {
                for i in 0..n {
                    // p = how far the αⁱ string extends upwards from w
                    let mut p = 0;
                    let mut up = w.dynkin.clone();
                    loop {
                        for (x, r) in up.iter_mut().zip(&a[i]) {
                            *x += r;
                        }
                        if index.contains_key(&up) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    if p + w.dynkin[i] < 1 {
                        continue;
                    }
                    let down: Vec<i32> = w.dynkin.iter().zip(&a[i]).map(|(x, r)| x - r).collect();
                    if seen.insert(down.clone(), ()).is_some() {
                        continue;
                    }
                    let mut descent = w.descent.clone();
                    descent[i] += 1;
                    next.push(WeightRecord {
                        level: level + 1,
                        descent,
                        lowest_root_label: self.lowest_root_label(&down),
                        dynkin: down,
                        degeneracy: 0,
                    });
                }
            }
            next.sort_by(|x, y| x.descent.cmp(&y.descent));
            for w in next {
                index.insert(w.dynkin.clone(), out.len());
                out.push(w);
            }
            start = end;
            level += 1;
        }
        Ok(out)
    }

    /// The weight system of `hw` with multiplicities.
    pub fn freudenthal(&self, hw: &[i32]) -> Result<Vec<WeightRecord>> {
        let mut ws = self.complete_descent(hw)?;
        let n = self.rank();
        let om: Vec<i64> = self.root_weights().iter().map(|&x| x as i64).collect();
        let roots: Vec<(Vec<i32>, Vec<i32>)> = self
            .positive_roots()
            .into_iter()
            .map(|k| {
                let d = self.dynkin_of_root(&k);
                (k, d)
            })
            .collect();
        let index: HashMap<Vec<i32>, usize> = ws
            .iter()
            .enumerate()
            .map(|(i, w)| (w.dynkin.clone(), i))
            .collect();
        let mut mult = vec![0u32; ws.len()];
        mult[0] = 1;
        let mut pos = 1;
        while pos < ws.len() {
            let level = ws[pos].level;
            let end = ws[pos..]
                .iter()
                .position(|w| w.level != level)
                .map_or(ws.len(), |e| pos + e);
            let done = &mult;
            let level_mult = par::try_map(&ws[pos..end], |w| -> Result<u32> {
                // Σ_j q_j ω_j (Λ_j + λ_j + 2) m(λ)
                //   = 2 Σ_α Σ_k m(λ+kα) Σ_j k^α_j ω_j (λ+kα)_j
                let lhs: i64 = (0..n)
                    .map(|j| w.descent[j] as i64 * om[j] * (hw[j] + w.dynkin[j] + 2) as i64)
                    .sum();
                let mut rhs: i64 = 0;
                for (k, d) in &roots {
                    let mut mu = w.dynkin.clone();
                    loop {
                        for (x, r) in mu.iter_mut().zip(d) {
                            *x += r;
                        }
                        let Some(&idx) = index.get(&mu) else { break };
                        let m = done[idx] as i64;
                        let dot: i64 = (0..n).map(|j| k[j] as i64 * om[j] * mu[j] as i64).sum();
                        rhs += 2 * m * dot;
                    }
                }
                if lhs <= 0 || rhs % lhs != 0 {
                    return Err(Error::Inconsistent(format!(
                        "Freudenthal recursion fails at weight {:?}",
                        w.dynkin
                    )));
                }
                Ok((rhs / lhs) as u32)
            })?;
            mult[pos..end].copy_from_slice(&level_mult);
            pos = end;
        }
        for (w, m) in ws.iter_mut().zip(mult) {
            w.degeneracy = m;
        }
        Ok(ws)
    }
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieAlgebra::A(n) => write!(f, "A{n}"),
            LieAlgebra::B(n) => write!(f, "B{n}"),
            LieAlgebra::C(n) => write!(f, "C{n}"),
            LieAlgebra::D(n) => write!(f, "D{n}"),
            LieAlgebra::E6 => f.write_str("E6"),
            LieAlgebra::E7 => f.write_str("E7"),
            LieAlgebra::E8 => f.write_str("E8"),
            LieAlgebra::F4 => f.write_str("F4"),
            LieAlgebra::G2 => f.write_str("G2"),
        }
    }
}

impl FromStr for LieAlgebra {
    type Err = Error;
    /// Accepts `A3`, `e6`, `A 3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars
            .next()
            .ok_or_else(|| Error::Parse("empty algebra name".into()))?;
        let rank: u32 = chars
            .as_str()
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid algebra `{s}`")))?;
        LieAlgebra::new(family, rank)
    }
}

impl Serialize for LieAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LieAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
