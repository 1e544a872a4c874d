//! MSB oracle simulation and recovery-instance generation.
//!
//! `MSB_{l,q}(z)` is any integer `u` with `|z - u| <= q / 2^(l+1)`,
//! where the difference is over plain integers, not modular distance:
//! values near `0` or `q` are clamped into `[0, q)` rather than
//! wrapped. The oracle admits any `u` in the window, so noise is an
//! explicit policy: exact center, uniform over the window, or the
//! alternating worst-case edge.

use num_bigint::RandBigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::poly::{ExponentSet, SparsePoly};
use crate::ring::RingModulus;
use crate::{Error, Int, Rat, Result};

/// How the simulated oracle picks `u` inside the admissible window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoisePolicy {
    /// `u = value`: zero noise.
    Center,
    /// `u = value + delta` with `delta` uniform in `[-W, W]`,
    /// `W = floor(q / 2^(l+1))`, clamped into `[0, q)`.
    Uniform,
    /// `delta = +-W`, alternating with the sample index.
    Edge,
}

impl std::fmt::Display for NoisePolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            NoisePolicy::Center => "center",
            NoisePolicy::Uniform => "uniform",
            NoisePolicy::Edge => "edge",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for NoisePolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "center" => Ok(NoisePolicy::Center),
            "uniform" => Ok(NoisePolicy::Uniform),
            "edge" => Ok(NoisePolicy::Edge),
            other => Err(format!("unknown noise policy {other:?}")),
        }
    }
}

/// One oracle response: a unit point `t` and the approximation `w` of
/// `f(t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MsbSample {
    pub t: Int,
    pub w: Int,
}

/// A complete recovery problem. `truth` carries the hidden polynomial
/// for generated experiments; it is serialized to a separate sidecar so
/// recovery runs cannot see it.
#[derive(Debug, Clone)]
pub struct MsbInstance {
    modulus: RingModulus,
    exponents: ExponentSet,
    ell: Rat,
    samples: Vec<MsbSample>,
    truth: Option<SparsePoly>,
}

impl MsbInstance {
    pub fn new(
        modulus: RingModulus,
        exponents: ExponentSet,
        ell: Rat,
        samples: Vec<MsbSample>,
        truth: Option<SparsePoly>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInstance);
        }
        if ell.is_negative() {
            return Err(Error::MalformedInstance("l must be nonnegative".into()));
        }
        if exponents.exponents().last().unwrap() >= modulus.q() {
            return Err(Error::InvalidExponents("exponents must be < q".into()));
        }
        for sample in &samples {
            if !modulus.is_unit(&sample.t) {
                return Err(Error::NonUnitPoint(sample.t.to_string()));
            }
            if sample.w.is_negative() || &sample.w >= modulus.q() {
                return Err(Error::MalformedInstance(format!(
                    "sample value {} outside [0, q)",
                    sample.w
                )));
            }
        }
        if let Some(f) = &truth {
            if f.exponent_set() != &exponents || f.modulus() != &modulus {
                return Err(Error::MalformedInstance(
                    "truth polynomial does not match instance".into(),
                ));
            }
        }
        Ok(MsbInstance {
            modulus,
            exponents,
            ell,
            samples,
            truth,
        })
    }

    pub fn modulus(&self) -> &RingModulus {
        &self.modulus
    }

    pub fn exponents(&self) -> &ExponentSet {
        &self.exponents
    }

    pub fn ell(&self) -> &Rat {
        &self.ell
    }

    pub fn num_samples(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[MsbSample] {
        &self.samples
    }

    pub fn points(&self) -> Vec<Int> {
        self.samples.iter().map(|s| s.t.clone()).collect()
    }

    pub fn truth(&self) -> Option<&SparsePoly> {
        self.truth.as_ref()
    }
}

/// `MSB_{l,q}` of a ring value under the given noise policy. `index`
/// drives the sign alternation of [`NoisePolicy::Edge`] and is ignored
/// otherwise.
pub fn msb<R: Rng + ?Sized>(
    value: &Int,
    ell: &Rat,
    m: &RingModulus,
    policy: NoisePolicy,
    rng: &mut R,
    index: usize,
) -> Int {
    assert!(!ell.is_negative(), "msb: l must be nonnegative");
    let window = m.floor_q_shr(&(ell + Rat::one()));
    let delta = match policy {
        NoisePolicy::Center => Int::zero(),
        NoisePolicy::Uniform => {
            if window.is_zero() {
                Int::zero()
            } else {
                rng.gen_bigint_range(&(-&window), &(&window + 1))
            }
        }
        NoisePolicy::Edge => {
            if index % 2 == 0 {
                window
            } else {
                -window
            }
        }
    };
    let u = value + delta;
    // clamp rather than wrap; clamping only shrinks |value - u|
    if u.is_negative() {
        Int::zero()
    } else if &u >= m.q() {
        m.q() - 1
    } else {
        u
    }
}

/// Draws a hidden polynomial and `d` oracle samples at uniform unit
/// points. Coefficients are uniform in `[0, q)`, resampled while all of
/// them are divisible by `p` (such an `f` degenerates to `p*g` and the
/// instance would be vacuous).
pub fn generate_instance<R: Rng + ?Sized>(
    m: &RingModulus,
    e: &ExponentSet,
    ell: &Rat,
    d: usize,
    noise: NoisePolicy,
    rng: &mut R,
) -> Result<MsbInstance> {
    if d == 0 {
        return Err(Error::EmptyInstance);
    }
    let p = Int::from(m.p());
    let coefficients = loop {
        let candidate: Vec<Int> = (0..e.sparsity())
            .map(|_| rng.gen_bigint_range(&Int::zero(), m.q()))
            .collect();
        if !candidate.iter().all(|a| a.is_multiple_of(&p)) {
            break candidate;
        }
    };
    let f = SparsePoly::new(m.clone(), e.clone(), coefficients)?;

    let samples: Vec<MsbSample> = (0..d)
        .map(|i| {
            let t = m.sample_unit(rng);
            let w = msb(&f.evaluate(&t), ell, m, noise, rng, i);
            MsbSample { t, w }
        })
        .collect();

    MsbInstance::new(m.clone(), e.clone(), ell.clone(), samples, Some(f))
}

/// The sample count `d = ceil(4 (s+1) / eps)` backing the recovery
/// guarantee; deliberately unoptimized and freely overridable.
pub fn default_d(s: usize, eps: &Rat) -> usize {
    assert!(eps.is_positive(), "default_d: eps must be positive");
    let d = (Rat::from_integer(Int::from(4 * (s as u64 + 1))) / eps).ceil();
    d.to_integer().to_usize().expect("d out of range")
}

// ---- file format ----------------------------------------------------
//
// Instances are single-line JSON with big integers as decimal strings:
//   {"p":..,"k":..,"s":..,"exponents":[".."],"ell_num":..,"ell_den":..,
//    "d":..,"samples":[{"t":"..","w":".."},..]}
// The hidden coefficients live in a sidecar: {"coefficients":[".."]}.

#[derive(Serialize, Deserialize)]
struct InstanceDto {
    p: u64,
    k: u32,
    s: usize,
    exponents: Vec<String>,
    ell_num: u64,
    ell_den: u64,
    d: usize,
    samples: Vec<SampleDto>,
}

#[derive(Serialize, Deserialize)]
struct SampleDto {
    t: String,
    w: String,
}

#[derive(Serialize, Deserialize)]
struct TruthDto {
    coefficients: Vec<String>,
}

fn parse_int(s: &str) -> Result<Int> {
    s.parse()
        .map_err(|_| Error::MalformedInstance(format!("bad integer {s:?}")))
}

impl MsbInstance {
    /// Instance as one line of JSON, without the hidden truth.
    pub fn to_json(&self) -> String {
        let dto = InstanceDto {
            p: self.modulus.p(),
            k: self.modulus.k(),
            s: self.exponents.sparsity(),
            exponents: self
                .exponents
                .exponents()
                .iter()
                .map(|e| e.to_string())
                .collect(),
            ell_num: self
                .ell
                .numer()
                .to_u64()
                .expect("l numerator out of range"),
            ell_den: self
                .ell
                .denom()
                .to_u64()
                .expect("l denominator out of range"),
            d: self.samples.len(),
            samples: self
                .samples
                .iter()
                .map(|s| SampleDto {
                    t: s.t.to_string(),
                    w: s.w.to_string(),
                })
                .collect(),
        };
        serde_json::to_string(&dto).expect("instance serialization cannot fail")
    }

    /// Sidecar with the hidden coefficients, if any.
    pub fn truth_to_json(&self) -> Option<String> {
        self.truth.as_ref().map(|f| {
            let dto = TruthDto {
                coefficients: f.coefficients().iter().map(|a| a.to_string()).collect(),
            };
            serde_json::to_string(&dto).expect("truth serialization cannot fail")
        })
    }

    /// Parses an instance, optionally rejoining it with its truth
    /// sidecar.
    pub fn from_json(instance: &str, truth: Option<&str>) -> Result<Self> {
        let dto: InstanceDto = serde_json::from_str(instance.trim())
            .map_err(|e| Error::MalformedInstance(e.to_string()))?;
        let modulus = RingModulus::new(dto.p, dto.k)?;
        let exponents = ExponentSet::new(
            dto.exponents
                .iter()
                .map(|e| parse_int(e))
                .collect::<Result<Vec<Int>>>()?,
        )?;
        if exponents.sparsity() != dto.s {
            return Err(Error::MalformedInstance(format!(
                "s = {} but {} exponents",
                dto.s,
                exponents.sparsity()
            )));
        }
        if dto.samples.len() != dto.d {
            return Err(Error::MalformedInstance(format!(
                "d = {} but {} samples",
                dto.d,
                dto.samples.len()
            )));
        }
        if dto.ell_den == 0 {
            return Err(Error::MalformedInstance("ell_den must be nonzero".into()));
        }
        let ell = Rat::new(Int::from(dto.ell_num), Int::from(dto.ell_den));
        let samples = dto
            .samples
            .iter()
            .map(|s| {
                Ok(MsbSample {
                    t: parse_int(&s.t)?,
                    w: parse_int(&s.w)?,
                })
            })
            .collect::<Result<Vec<MsbSample>>>()?;
        let truth = match truth {
            None => None,
            Some(text) => {
                let tdto: TruthDto = serde_json::from_str(text.trim())
                    .map_err(|e| Error::MalformedInstance(e.to_string()))?;
                let coefficients = tdto
                    .coefficients
                    .iter()
                    .map(|a| parse_int(a))
                    .collect::<Result<Vec<Int>>>()?;
                Some(SparsePoly::new(
                    modulus.clone(),
                    exponents.clone(),
                    coefficients,
                )?)
            }
        };
        MsbInstance::new(modulus, exponents, ell, samples, truth)
    }
}
