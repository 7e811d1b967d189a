//! The catalog of nonabelian finite simple groups of order at most 10^5.
//!
//! Entries come from four generated families (alternating, PSL(2, q),
//! PSL(3, q), PSU(3, q)) plus the bundled permutation groups covering the
//! remaining isomorphism types in range (M11, M12, PSU4(2), Sz(8)).
//! Coincidences between families are deduplicated to one representative:
//! Alt(5) stands for PSL(2, 4) and PSL(2, 5), Alt(6) for PSL(2, 9), and
//! PSL(2, 7) for PSL(3, 2). Alt(8) and PSL(3, 4) share order 20160 but are
//! not isomorphic, so both appear.

use crate::field::factor_prime_power;
use crate::group::{
    bundled_group, factorial, psl2_order, psl3_order, psu3_order, GroupError, GroupSpec,
};

/// Largest order bound the catalog accepts.
pub const CATALOG_CEILING: u64 = 100_000;

/// Orders of the bundled permutation entries; the test suite re-derives them
/// by closure from the data-file generators.
const BUNDLED_SIMPLE: [(&str, u64); 4] =
    [("M11", 7920), ("M12", 95040), ("PSU4_2", 25920), ("Sz8", 29120)];

/// One catalog row.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub spec: GroupSpec,
    pub order: u64,
    /// Whether the group is isomorphic to some PSL(2, q), PSL(3, q) or
    /// PSU(3, q), possibly under another name (Alt(5), Alt(6)). These are the
    /// groups the short-element-order construction cannot cover.
    pub special_linear: bool,
}

/// All nonabelian simple groups of order <= n, sorted by order and then by
/// spec text. Complete and duplicate-free for n up to [`CATALOG_CEILING`].
pub fn catalog_entries(n: u64) -> Result<Vec<CatalogEntry>, GroupError> {
    if n > CATALOG_CEILING {
        return Err(GroupError::CeilingExceeded { ceiling: CATALOG_CEILING });
    }
    let mut entries = Vec::new();

    for k in 5u32.. {
        let order = factorial(k).expect("small factorial") / 2;
        if order > n {
            break;
        }
        // Alt(5) and Alt(6) double as PSL(2, 4)/PSL(2, 5) and PSL(2, 9).
        entries.push(CatalogEntry {
            spec: GroupSpec::Alt(k),
            order,
            special_linear: k == 5 || k == 6,
        });
    }

    // The break conditions divide by the largest possible center, because the
    // actual divisor gcd(2, q-1) or gcd(3, q∓1) oscillates with q and the raw
    // order formula is not monotone.
    for q in 4u64.. {
        if q * (q * q - 1) / 2 > n {
            break;
        }
        let order = psl2_order(q);
        // 4, 5 and 9 are represented by Alt(5) and Alt(6).
        if order <= n && factor_prime_power(q).is_some() && ![4, 5, 9].contains(&q) {
            entries.push(CatalogEntry {
                spec: GroupSpec::Psl2(q as u32),
                order,
                special_linear: true,
            });
        }
    }

    for q in 3u64.. {
        if q * q * q * (q * q * q - 1) * (q * q - 1) / 3 > n {
            break;
        }
        let order = psl3_order(q);
        // PSL(3, 2) is represented by PSL(2, 7), hence the start at q = 3.
        if order <= n && factor_prime_power(q).is_some() {
            entries.push(CatalogEntry {
                spec: GroupSpec::Psl3(q as u32),
                order,
                special_linear: true,
            });
        }
    }

    for q in 3u64.. {
        if q * q * q * (q * q * q + 1) * (q * q - 1) / 3 > n {
            break;
        }
        let order = psu3_order(q);
        if order <= n && factor_prime_power(q).is_some() {
            entries.push(CatalogEntry {
                spec: GroupSpec::Psu3(q as u32),
                order,
                special_linear: true,
            });
        }
    }

    for (name, order) in BUNDLED_SIMPLE {
        if order <= n {
            entries.push(CatalogEntry { spec: bundled_group(name)?, order, special_linear: false });
        }
    }

    entries.sort_by(|a, b| (a.order, a.spec.to_string()).cmp(&(b.order, b.spec.to_string())));
    Ok(entries)
}

/// The catalog as bare specs.
pub fn simple_catalog(n: u64) -> Result<Vec<GroupSpec>, GroupError> {
    Ok(catalog_entries(n)?.into_iter().map(|e| e.spec).collect())
}
