//! Short Weierstrass curves `y^2 = x^3 - 3x + b` over prime fields with
//! cofactor 1.

use std::fmt;
use std::sync::OnceLock;

use crypto_bigint::modular::runtime_mod::{DynResidue, DynResidueParams};
use crypto_bigint::{Encoding, U256};
use num_bigint::BigUint;

use super::bigint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveId {
    /// brainpoolP160t1: 160-bit prime field, `a = -3`, cofactor 1.
    Brainpool160T1,
    /// NIST P-256.
    P256,
}

impl CurveId {
    pub fn code(self) -> u8 {
        match self {
            CurveId::Brainpool160T1 => 1,
            CurveId::P256 => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(CurveId::Brainpool160T1),
            2 => Some(CurveId::P256),
            _ => None,
        }
    }

    pub fn curve(self) -> &'static Curve {
        static BP160: OnceLock<Curve> = OnceLock::new();
        static P256: OnceLock<Curve> = OnceLock::new();
        match self {
            CurveId::Brainpool160T1 => BP160.get_or_init(|| {
                Curve::new(
                    self,
                    "e95e4a5f737059dc60dfc7ad95b3d8139515620f",
                    "7a556b6dae535b7b51ed2c4d7daa7a0b5c55f380",
                    "b199b13b9b34efc1397e64baeb05acc265ff2378",
                    "add6718b7c7c1961f0991b842443772152c9e0ad",
                    "e95e4a5f737059dc60df5991d45029409e60fc09",
                )
            }),
            CurveId::P256 => P256.get_or_init(|| {
                Curve::new(
                    self,
                    "ffffffff00000001000000000000000000000000ffffffffffffffffffffffff",
                    "5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b",
                    "6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296",
                    "4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5",
                    "ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551",
                )
            }),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub enum Affine {
    Infinity,
    Point { x: BigUint, y: BigUint },
}

fn to_u256(v: &BigUint) -> U256 {
    let bytes: [u8; 32] = bigint::to_fixed_bytes(v, 32).try_into().expect("32 bytes");
    U256::from_be_bytes(bytes)
}

impl fmt::Debug for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Affine::Infinity => f.write_str("Infinity"),
            Affine::Point { x, y } => write!(f, "({x:x}, {y:x})"),
        }
    }
}

type Fe = DynResidue<{ U256::LIMBS }>;

#[derive(Clone, Copy)]
struct Jacobian {
    x: Fe,
    y: Fe,
    z: Fe,
}

fn is_zero(a: &Fe) -> bool {
    *a.as_montgomery() == U256::ZERO
}

pub struct Curve {
    pub id: CurveId,
    pub p: BigUint,
    pub b: BigUint,
    pub n: BigUint,
    pub g: Affine,
    field: DynResidueParams<{ U256::LIMBS }>,
    b_fe: Fe,
    table: OnceLock<Vec<[(Fe, Fe); 16]>>,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve").field("id", &self.id).finish()
    }
}

impl Curve {
    fn new(id: CurveId, p: &str, b: &str, gx: &str, gy: &str, n: &str) -> Self {
        let h = |s: &str| BigUint::parse_bytes(s.as_bytes(), 16).expect("valid curve constant");
        let p = h(p);
        let field = DynResidueParams::new(&to_u256(&p));
        let b = h(b);
        Self {
            id,
            b_fe: Fe::new(&to_u256(&b), field),
            p,
            b,
            n: h(n),
            g: Affine::Point { x: h(gx), y: h(gy) },
            field,
            table: OnceLock::new(),
        }
    }

    pub fn field_len(&self) -> usize {
        bigint::byte_width(&self.p)
    }

    pub fn scalar_len(&self) -> usize {
        bigint::byte_width(&self.n)
    }

    fn fe(&self, v: &BigUint) -> Fe {
        Fe::new(&to_u256(v), self.field)
    }

    fn big(&self, v: &Fe) -> BigUint {
        BigUint::from_bytes_be(&v.retrieve().to_be_bytes())
    }

    fn infinity(&self) -> Jacobian {
        Jacobian {
            x: Fe::one(self.field),
            y: Fe::one(self.field),
            z: Fe::zero(self.field),
        }
    }

    pub fn is_on_curve(&self, pt: &Affine) -> bool {
        match pt {
            Affine::Infinity => true,
            Affine::Point { x, y } => {
                if *x >= self.p || *y >= self.p {
                    return false;
                }
                let (x, y) = (self.fe(x), self.fe(y));
                let x3 = x.square() * x;
                y.square() == x3 - (x + x + x) + self.b_fe
            }
        }
    }

    // dbl-2001-b for a = -3
    fn double(&self, pt: &Jacobian) -> Jacobian {
        if is_zero(&pt.z) || is_zero(&pt.y) {
            return self.infinity();
        }
        let delta = pt.z.square();
        let gamma = pt.y.square();
        let beta = pt.x * gamma;
        let t = (pt.x - delta) * (pt.x + delta);
        let alpha = t + t + t;
        let beta2 = beta + beta;
        let beta4 = beta2 + beta2;
        let beta8 = beta4 + beta4;
        let x3 = alpha.square() - beta8;
        let yz = pt.y + pt.z;
        let z3 = yz.square() - gamma - delta;
        let g2 = gamma.square();
        let g4 = g2 + g2;
        let g8 = g4 + g4;
        let y3 = alpha * (beta4 - x3) - (g8 + g8);
        Jacobian { x: x3, y: y3, z: z3 }
    }

    // madd-2007-bl
    fn add_mixed(&self, a: &Jacobian, x2: &Fe, y2: &Fe) -> Jacobian {
        if is_zero(&a.z) {
            return Jacobian {
                x: *x2,
                y: *y2,
                z: Fe::one(self.field),
            };
        }
        let z1z1 = a.z.square();
        let u2 = *x2 * z1z1;
        let s2 = *y2 * a.z * z1z1;
        let h = u2 - a.x;
        let d = s2 - a.y;
        let r = d + d;
        if is_zero(&h) {
            return if is_zero(&r) { self.double(a) } else { self.infinity() };
        }
        let hh = h.square();
        let i = hh + hh;
        let i = i + i;
        let j = h * i;
        let v = a.x * i;
        let x3 = r.square() - j - v - v;
        let yj = a.y * j;
        let y3 = r * (v - x3) - yj - yj;
        let z3 = (a.z + h).square() - z1z1 - hh;
        Jacobian { x: x3, y: y3, z: z3 }
    }

    fn to_affine(&self, pt: &Jacobian) -> Affine {
        if is_zero(&pt.z) {
            return Affine::Infinity;
        }
        let (zinv, _) = pt.z.invert();
        let zinv2 = zinv.square();
        Affine::Point {
            x: self.big(&(pt.x * zinv2)),
            y: self.big(&(pt.y * zinv2 * zinv)),
        }
    }

    fn coords(&self, pt: &Affine) -> Option<(Fe, Fe)> {
        match pt {
            Affine::Infinity => None,
            Affine::Point { x, y } => Some((self.fe(x), self.fe(y))),
        }
    }

    pub fn add(&self, a: &Affine, b: &Affine) -> Affine {
        let Some((x1, y1)) = self.coords(a) else {
            return b.clone();
        };
        let Some((x2, y2)) = self.coords(b) else {
            return a.clone();
        };
        let ja = self.add_mixed(&self.infinity(), &x1, &y1);
        self.to_affine(&self.add_mixed(&ja, &x2, &y2))
    }

    /// `k * pt` by left-to-right double-and-add.
    pub fn mul(&self, k: &BigUint, pt: &Affine) -> Affine {
        let Some((x, y)) = self.coords(pt) else {
            return Affine::Infinity;
        };
        let mut acc = self.infinity();
        for i in (0..k.bits()).rev() {
            acc = self.double(&acc);
            if k.bit(i) {
                acc = self.add_mixed(&acc, &x, &y);
            }
        }
        self.to_affine(&acc)
    }

    /// `k * G` through a 4-bit fixed-base table built on first use.
    pub fn mul_base_fixed(&self, k: &BigUint) -> Affine {
        let table = self.table.get_or_init(|| self.build_table());
        let digits = k.to_radix_le(16);
        if digits.len() > table.len() {
            return self.mul(k, &self.g);
        }
        let mut acc = self.infinity();
        for (row, &d) in table.iter().zip(&digits) {
            if d != 0 {
                let (x, y) = &row[d as usize];
                acc = self.add_mixed(&acc, x, y);
            }
        }
        self.to_affine(&acc)
    }

    // row i holds j * 16^i * G for j in 1..16; slot 0 is unused
    fn build_table(&self) -> Vec<[(Fe, Fe); 16]> {
        let windows = self.n.bits().div_ceil(4) as usize;
        let zero = (Fe::zero(self.field), Fe::zero(self.field));
        let mut rows = Vec::with_capacity(windows);
        let mut step = self.g.clone();
        for _ in 0..windows {
            let mut row = [zero; 16];
            let mut cur = Affine::Infinity;
            for slot in row.iter_mut().skip(1) {
                cur = self.add(&cur, &step);
                *slot = self.coords(&cur).expect("multiples below the order are finite");
            }
            step = self.add(&cur, &step);
            rows.push(row);
        }
        rows
    }

    /// Uncompressed SEC1 encoding `04 || x || y`; infinity is `00`.
    pub fn encode_point(&self, pt: &Affine) -> Vec<u8> {
        match pt {
            Affine::Infinity => vec![0],
            Affine::Point { x, y } => {
                let w = self.field_len();
                let mut out = vec![4];
                out.extend(bigint::to_fixed_bytes(x, w));
                out.extend(bigint::to_fixed_bytes(y, w));
                out
            }
        }
    }

    /// Decodes a finite point and checks it lies on the curve.
    pub fn decode_point(&self, bytes: &[u8]) -> Option<Affine> {
        let w = self.field_len();
        if bytes.len() != 1 + 2 * w || bytes[0] != 4 {
            return None;
        }
        let pt = Affine::Point {
            x: BigUint::from_bytes_be(&bytes[1..1 + w]),
            y: BigUint::from_bytes_be(&bytes[1 + w..]),
        };
        self.is_on_curve(&pt).then_some(pt)
    }
}
