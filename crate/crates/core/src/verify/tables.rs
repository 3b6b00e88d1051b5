use rand::Rng;

use crate::error::{Error, Result};

/// Largest bit-string length a table may enumerate.
pub const MAX_TABLE_BITS: u32 = 20;

/// A probability distribution on `{0,1}^n`, indexed by the integer whose bit
/// `i - 1` is component `Y_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionTable {
    n: u32,
    mass: Vec<f64>,
}

impl DistributionTable {
    pub fn new(n: u32, mass: Vec<f64>) -> Result<Self> {
        if n > MAX_TABLE_BITS {
            return Err(Error::Resource(format!("n = {n} exceeds {MAX_TABLE_BITS}")));
        }
        if mass.len() != 1usize << n {
            return Err(Error::domain(format!(
                "distribution on {n} bits needs {} masses, got {}",
                1usize << n,
                mass.len()
            )));
        }
        if mass.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
            return Err(Error::domain("masses must be finite and nonnegative"));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("masses sum to {total}, not 1")));
        }
        Ok(DistributionTable { n, mass })
    }

    pub fn point_mass(n: u32, y: usize) -> Result<Self> {
        let mut mass = vec![0.0; 1usize << n.min(MAX_TABLE_BITS)];
        *mass
            .get_mut(y)
            .ok_or_else(|| Error::domain("point outside the support"))? = 1.0;
        Self::new(n, mass)
    }

    pub fn uniform(n: u32) -> Result<Self> {
        let size = 1usize << n.min(MAX_TABLE_BITS);
        Self::new(n, vec![1.0 / size as f64; size])
    }

    /// Random masses; roughly half the support is zeroed to vary the shape.
    pub fn random(n: u32, rng: &mut impl Rng) -> Result<Self> {
        let size = 1usize << n.min(MAX_TABLE_BITS);
        let sparse = rng.gen_bool(0.5);
        let mut mass: Vec<f64> = (0..size)
            .map(|_| {
                if sparse && rng.gen_bool(0.5) {
                    0.0
                } else {
                    rng.gen::<f64>()
                }
            })
            .collect();
        if mass.iter().all(|&m| m == 0.0) {
            mass[rng.gen_range(0..size)] = 1.0;
        }
        let total: f64 = mass.iter().sum();
        mass.iter_mut().for_each(|m| *m /= total);
        Self::new(n, mass)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }
}

/// An explicit leakage function `{0,1}^{n0} -> {0,1}^{l0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeakageTable {
    n0: u32,
    l0: u32,
    table: Vec<u32>,
}

impl LeakageTable {
    pub fn new(n0: u32, l0: u32, table: Vec<u32>) -> Result<Self> {
        if n0 > MAX_TABLE_BITS {
            return Err(Error::Resource(format!(
                "n0 = {n0} exceeds {MAX_TABLE_BITS}"
            )));
        }
        if l0 > 31 {
            return Err(Error::domain(format!("l0 = {l0} exceeds 31")));
        }
        if table.len() != 1usize << n0 {
            return Err(Error::domain(format!(
                "leakage table on {n0} bits needs {} entries, got {}",
                1usize << n0,
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&v| v >> l0 != 0) {
            return Err(Error::domain(format!(
                "leak value {bad} does not fit in {l0} bits"
            )));
        }
        Ok(LeakageTable { n0, l0, table })
    }

    /// Leaks key bits `1..=keep`.
    pub fn projection(n0: u32, keep: u32) -> Result<Self> {
        if keep > n0 {
            return Err(Error::domain("cannot keep more bits than the key has"));
        }
        let mask = (1u32 << keep) - 1;
        Self::new(n0, keep, (0..1u32 << n0).map(|x| x & mask).collect())
    }

    pub fn constant(n0: u32, l0: u32, value: u32) -> Result<Self> {
        Self::new(n0, l0, vec![value; 1usize << n0.min(MAX_TABLE_BITS)])
    }

    pub fn random(n0: u32, l0: u32, rng: &mut impl Rng) -> Result<Self> {
        let size = 1usize << n0.min(MAX_TABLE_BITS);
        Self::new(
            n0,
            l0,
            (0..size).map(|_| rng.gen_range(0..1u32 << l0)).collect(),
        )
    }

    pub fn n0(&self) -> u32 {
        self.n0
    }

    pub fn l0(&self) -> u32 {
        self.l0
    }

    pub fn leak(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    /// `|S_l|` for every leak value `l`.
    pub fn fiber_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![0u64; 1usize << self.l0];
        for &v in &self.table {
            sizes[v as usize] += 1;
        }
        sizes
    }

    /// Preimage `S_l` of a leak value.
    pub fn fiber(&self, leak: u32) -> Vec<u32> {
        (0..self.table.len() as u32)
            .filter(|&x| self.table[x as usize] == leak)
            .collect()
    }
}
