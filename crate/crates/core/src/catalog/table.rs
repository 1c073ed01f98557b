//! The limb-variant table and robot counting.

use alloc::vec::Vec;

use super::descriptor::{parse_pattern, JointSymbol, VariantDescriptor};
use crate::constraint::SystemFamily;

const TYPICAL: &str = "typical case";
const REDUNDANT: &str = "redundant case";
const OFF_CENTER: &str = "intersection off center";
const CATEGORY_B: &str = "non (.)^i = category B";
const PRISMATIC_NO_EFFECT: &str = "$∞ no effect";

const S5_CASE_I: [&str; 10] = [
    "R^i R^i R^i R R",
    "R^i R^i R R R",
    "R^i R^i R R R^i",
    "R^i R^i R R^i R",
    "R^i R R^i R R^i",
    "R^i R R R^i R^i",
    "R R^i R^i R^i R",
    "R R^i R^i R R^i",
    "R R^i R R^i R^i",
    "R R R^i R^i R^i",
];

const S5_CASE_II: [&str; 3] = [
    "R^i R^i R^p R^p R^p",
    "R^i R^p R^p R^p R^i",
    "R^p R^p R^p R^i R^i",
];

const S41_CASE_II: [&str; 9] = [
    "R^i R^i R^p R^p P^p",
    "R^i R^i R^p P^p R^p",
    "R^i R^i P^p R^p R^p",
    "R^i R^p R^p P^p R^i",
    "R^i R^p P^p R^p R^i",
    "R^i P^p R^p R^p R^i",
    "R^p R^p P^p R^i R^i",
    "R^p P^p R^p R^i R^i",
    "P^p R^p R^p R^i R^i",
];

const S32_CASE_I: [&str; 10] = [
    "R^i R^i R^i P P",
    "R^i R^i P R^i P",
    "R^i R^i P P R^i",
    "R^i P R^i R^i P",
    "R^i P R^i P R^i",
    "R^i P P R^i R^i",
    "P R^i R^i R^i P",
    "P R^i R^i P R^i",
    "P R^i P R^i R^i",
    "P P R^i R^i R^i",
];

const S32_CASE_II: [&str; 9] = [
    "R^i R^i R^p P^p P^p",
    "R^i R^i P^p R^p P^p",
    "R^i R^i P^p P^p R^p",
    "R^i R^p P^p P^p R^i",
    "R^i P^p R^p P^p R^i",
    "R^i P^p P^p R^p R^i",
    "R^p P^p P^p R^i R^i",
    "P^p R^p P^p R^i R^i",
    "P^p P^p R^p R^i R^i",
];

const S4: [&str; 4] = [
    "R^i R^i R^i R",
    "R^i R^i R R^i",
    "R^i R R^i R^i",
    "R R^i R^i R^i",
];

const S31: [&str; 4] = [
    "R^i R^i R^i P",
    "R^i R^i P R^i",
    "R^i P R^i R^i",
    "P R^i R^i R^i",
];

fn row(id: &str, at_center: bool, note: &'static str) -> VariantDescriptor {
    let (pattern, _) = parse_pattern(id).expect("table rows are well formed");
    VariantDescriptor::new(pattern, at_center, note)
}

/// All distinct orderings of a multiset of symbols, in lexicographic order.
pub fn expand_permutations(base: &[JointSymbol]) -> Vec<Vec<JointSymbol>> {
    let mut cur: Vec<JointSymbol> = base.to_vec();
    cur.sort();
    let mut out = alloc::vec![cur.clone()];
    // next lexicographic permutation until it wraps
    loop {
        let n = cur.len();
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

/// The 73 limb variants in table order.
pub fn catalog() -> Vec<VariantDescriptor> {
    let mut out = Vec::with_capacity(73);
    out.extend(S5_CASE_I.iter().map(|id| row(id, true, "")));
    out.extend(S5_CASE_II.iter().map(|id| row(id, true, "")));
    out.extend(S5_CASE_II.iter().map(|id| row(id, false, OFF_CENTER)));
    let base = [
        JointSymbol::RI,
        JointSymbol::RI,
        JointSymbol::RI,
        JointSymbol::R,
        JointSymbol::P,
    ];
    out.extend(
        expand_permutations(&base)
            .into_iter()
            .map(|p| VariantDescriptor::new(p, true, "")),
    );
    out.extend(S41_CASE_II.iter().map(|id| row(id, true, "")));
    out.extend(S32_CASE_I.iter().map(|id| row(id, true, CATEGORY_B)));
    out.extend(S32_CASE_II.iter().map(|id| row(id, true, CATEGORY_B)));
    out.extend(S4.iter().map(|id| row(id, true, REDUNDANT)));
    out.extend(S31.iter().map(|id| row(id, true, PRISMATIC_NO_EFFECT)));
    out.push(row("R^i R^i R^i", true, TYPICAL));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogCounts {
    /// Rows per family in table order; empty when counting from a bare limb count.
    pub per_category: Vec<(SystemFamily, u64)>,
    pub total_limbs: u64,
    pub symmetric: u64,
    pub asymmetric: u64,
    pub total_robots: u64,
}

/// Robot variants from `limb_count` limb types: one symmetric robot per
/// type and `L^2` robots in total.
pub fn count_robots(limb_count: u64) -> CatalogCounts {
    let total = limb_count * limb_count;
    CatalogCounts {
        per_category: Vec::new(),
        total_limbs: limb_count,
        symmetric: limb_count,
        asymmetric: total - limb_count,
        total_robots: total,
    }
}

pub fn catalog_counts() -> CatalogCounts {
    let cat = catalog();
    let mut counts = count_robots(cat.len() as u64);
    counts.per_category = SystemFamily::TABLE
        .iter()
        .map(|f| (*f, cat.iter().filter(|d| d.system() == *f).count() as u64))
        .collect();
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::CaseTag;
    use alloc::collections::BTreeSet;

    #[test]
    fn seventy_three_unique_rows() {
        let cat = catalog();
        assert_eq!(cat.len(), 73);
        let ids: BTreeSet<_> = cat.iter().map(|d| d.id.clone()).collect();
        assert_eq!(ids.len(), 73);
    }

    #[test]
    fn per_family_counts() {
        let c = catalog_counts();
        let got: Vec<u64> = c.per_category.iter().map(|(_, n)| *n).collect();
        assert_eq!(got, [16, 29, 19, 4, 4, 1]);
        assert_eq!(
            (c.symmetric, c.asymmetric, c.total_robots),
            (73, 5256, 5329)
        );
    }

    #[test]
    fn case_split() {
        let cat = catalog();
        let count = |f, c| {
            cat.iter()
                .filter(|d| d.class.system == f && d.class.case_tag == c)
                .count()
        };
        assert_eq!(count(SystemFamily::S5_0, CaseTag::CaseI), 10);
        assert_eq!(count(SystemFamily::S5_0, CaseTag::CaseII), 6);
        assert_eq!(count(SystemFamily::S4_0_1inf, CaseTag::CaseI), 20);
        assert_eq!(count(SystemFamily::S4_0_1inf, CaseTag::CaseII), 9);
        assert_eq!(count(SystemFamily::S3_0_2inf, CaseTag::CaseI), 10);
        assert_eq!(count(SystemFamily::S3_0_2inf, CaseTag::CaseII), 9);
    }

    #[test]
    fn only_four_revolute_rows_are_redundant() {
        let cat = catalog();
        let red: Vec<_> = cat.iter().filter(|d| d.redundant).collect();
        assert_eq!(red.len(), 4);
        assert!(red.iter().all(|d| d.system() == SystemFamily::S4_0));
    }

    #[test]
    fn typical_case_row() {
        let last = catalog().pop().unwrap();
        assert_eq!(last.id, "R^i R^i R^i");
        assert_eq!(last.note, TYPICAL);
    }

    #[test]
    fn permutation_counts() {
        let base = [
            JointSymbol::RI,
            JointSymbol::RI,
            JointSymbol::RI,
            JointSymbol::R,
            JointSymbol::P,
        ];
        assert_eq!(expand_permutations(&base).len(), 20);
        assert_eq!(expand_permutations(&[JointSymbol::R; 5]).len(), 1);
        assert_eq!(
            expand_permutations(&[JointSymbol::R, JointSymbol::R, JointSymbol::P]).len(),
            3
        );
    }

    #[test]
    fn small_counts() {
        let c = count_robots(1);
        assert_eq!((c.symmetric, c.asymmetric, c.total_robots), (1, 0, 1));
        let c = count_robots(2);
        assert_eq!((c.symmetric, c.asymmetric, c.total_robots), (2, 2, 4));
    }

    #[test]
    fn ids_round_trip() {
        for d in catalog() {
            let back: VariantDescriptor = d.id.parse().unwrap();
            assert_eq!(back, d);
        }
    }
}
