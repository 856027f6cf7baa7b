//! Resource caps shared by every module.

/// Environment variable that overrides [`Limits::max_entries`].
pub const MAX_ENTRIES_ENV: &str = "SOC_MAX_ENTRIES";

/// Largest coefficient count accepted for a power-series functor.
pub const MAX_TRUNCATION: usize = 1024;

/// Largest truncation accepted for the factorial functor (`20!` is the last
/// factorial that fits comfortably before `f64` loses integer exactness).
pub const MAX_FACTORIAL_TRUNCATION: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Total matrix entries allowed for any constructed matrix.
    pub max_entries: usize,
    /// Largest `n` for set-partition enumeration.
    pub max_partition_n: usize,
    /// Largest tensor order for the symmetrizer (it sums over `n!` terms).
    pub max_symmetrize_order: usize,
    /// Largest cross-effect arity (inclusion-exclusion runs over `2^k` subsets).
    pub max_arity: usize,
    /// Largest degree for surjection enumeration.
    pub max_surjection_degree: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_entries: 1_000_000,
            max_partition_n: 12,
            max_symmetrize_order: 8,
            max_arity: 12,
            max_surjection_degree: 10,
        }
    }
}

impl Limits {
    /// Defaults, with `max_entries` taken from `SOC_MAX_ENTRIES` when set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = std::env::var(MAX_ENTRIES_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            limits.max_entries = cap;
        }
        limits
    }

    pub(crate) fn check_entries(&self, what: &str, rows: usize, cols: usize) -> crate::Result<()> {
        let requested = (rows as u128) * (cols as u128);
        if requested > self.max_entries as u128 {
            return Err(crate::SocError::capacity(
                what,
                requested,
                self.max_entries as u128,
            ));
        }
        Ok(())
    }
}
