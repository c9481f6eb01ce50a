//! Counter-based site colours: every bit is a pure function of
//! (seed, trial, site index), so trials can be generated in any order on any
//! number of threads and replayed exactly.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const WORD_SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// SplitMix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Key of one trial's stream.
#[inline]
pub fn trial_key(seed: u64, trial: u64) -> u64 {
    mix64(seed.wrapping_add(GOLDEN.wrapping_mul(trial.wrapping_add(1))))
}

/// The `w`-th 64-bit word of a trial stream.
#[inline]
pub fn stream_word(key: u64, w: u64) -> u64 {
    mix64(key ^ mix64(w.wrapping_add(WORD_SALT)))
}

/// How a probability turns stream words into colours.
///
/// At p = 1/2 one word supplies 64 sites; otherwise site i uses word i and is
/// black iff its top 53 bits fall below round(p·2⁵³).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    Half,
    Below(u64),
}

impl Threshold {
    pub fn new(p: f64) -> Self {
        if p == 0.5 {
            Threshold::Half
        } else {
            Threshold::Below((p.clamp(0.0, 1.0) * (1u64 << 53) as f64).round() as u64)
        }
    }

    #[inline]
    pub fn black(self, key: u64, site: u32) -> bool {
        match self {
            Threshold::Half => (stream_word(key, (site >> 6) as u64) >> (site & 63)) & 1 == 1,
            Threshold::Below(t) => (stream_word(key, site as u64) >> 11) < t,
        }
    }
}

/// Uniform f64 in [0, 1) from a counter, for tests and jitter.
pub fn unit_f64(seed: u64, counter: u64) -> f64 {
    (stream_word(trial_key(seed, 0), counter) >> 11) as f64 / (1u64 << 53) as f64
}
