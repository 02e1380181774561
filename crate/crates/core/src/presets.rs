//! Named sets and families used by the command line and the demo.

use crate::catalog::{dim4_triplet, dim8_explicit, fourier, s4, MubSet};
use crate::error::{Error, Result};
use crate::gerengine::{
    construction1, find_ger_pairs, gram, inject, inject_unchecked, max_compatible_pairs, ParamFamily,
};
use crate::matcore::{ComplexMatrix, Tolerance};

pub const SETS: &[&str] = &["dim4", "dim8", "dim8-quintuplet", "dim8-triplet", "s4", "fourier<N>"];

pub const FAMILIES: &[&str] = &[
    "dim4",
    "dim8-quintuplet",
    "dim8-triplet",
    "dim8-triplet-all",
    "fourier<N>",
];

fn fourier_dim(name: &str) -> Option<Result<usize>> {
    let n = name.strip_prefix("fourier")?;
    Some(
        n.parse::<usize>()
            .ok()
            .filter(|&n| n >= 2)
            .ok_or_else(|| Error::Parse(format!("bad fourier dimension in {name:?}"))),
    )
}

/// `dim4`: `{I, H2, H3}`; `dim8` and `dim8-quintuplet`: `{I, H1, H2, H3, H5}`;
/// `dim8-triplet`: `{I, H1, H2, H3}`; `s4`: the nine-basis set;
/// `fourier<N>`: `{I, F_N}`.
pub fn named_set(name: &str) -> Result<MubSet> {
    if let Some(n) = fourier_dim(name) {
        let n = n?;
        return MubSet::new(
            vec![ComplexMatrix::identity(n), fourier(n)?],
            vec!["I".into(), format!("F{n}")],
            Tolerance::CONSTRUCTION,
        );
    }
    match name {
        "dim4" => Ok(dim4_triplet()),
        "dim8" | "dim8-quintuplet" => Ok(dim8_explicit()),
        "dim8-triplet" => dim8_explicit().subset(&[0, 1, 2, 3]),
        "s4" => Ok(s4()),
        _ => Err(Error::Parse(format!(
            "unknown set {name:?}; expected one of {}",
            SETS.join(", ")
        ))),
    }
}

/// The largest compatible selection of slots on a named set.
/// `dim8-triplet-all` takes every GER pair of `{I, H1, H2, H3}` without the
/// compatibility check, so it is generally not unbiased.
pub fn named_family(name: &str, tol: Tolerance) -> Result<ParamFamily> {
    if let Some(n) = fourier_dim(name) {
        return construction1(&fourier(n?)?, tol);
    }
    if name == "dim8-triplet-all" {
        let set = named_set("dim8-triplet")?;
        let pairs = find_ger_pairs(&gram(&set), false, tol);
        return inject_unchecked(&set, &pairs, tol);
    }
    if !FAMILIES.contains(&name) {
        return Err(Error::Parse(format!(
            "unknown family {name:?}; expected one of {}",
            FAMILIES.join(", ")
        )));
    }
    family_of(&named_set(name)?, tol)
}

/// Injects the largest compatible selection of GER pairs outside the
/// reference block.
pub fn family_of(set: &MubSet, tol: Tolerance) -> Result<ParamFamily> {
    let pairs = find_ger_pairs(&gram(set), false, tol);
    let chosen = max_compatible_pairs(set, &pairs, tol);
    inject(set, &chosen, tol)
}
