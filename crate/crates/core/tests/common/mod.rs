#![allow(dead_code)]

use abscomp::generators::{random_ac_pair, random_non_ac_pair, GenClass, GenConfig};
use abscomp::{Contraction, Tolerances};

pub fn pol() -> Tolerances {
    Tolerances::default()
}

/// Compatible-pair classes available in dimension `n`.
pub fn ac_classes(n: usize) -> Vec<GenClass> {
    let mut classes = vec![GenClass::NonstrictAcPair, GenClass::CommutingAcPair];
    if n == 2 {
        classes.push(GenClass::AcPairM2);
    } else if n.is_multiple_of(2) {
        classes.push(GenClass::AcPairMn);
    }
    classes
}

/// Trial `i` of the compatible corpus in M_n, cycling through the classes.
pub fn ac_pair(n: usize, seed: u64, i: u64) -> (Contraction, Contraction) {
    let classes = ac_classes(n);
    let class = classes[i as usize % classes.len()];
    let cfg = GenConfig::new(class, n, seed).unwrap().with_stream(i);
    random_ac_pair(&cfg).unwrap()
}

pub fn non_ac_pair(n: usize, seed: u64, i: u64) -> (Contraction, Contraction) {
    let cfg = GenConfig::new(GenClass::Generic, n, seed).unwrap().with_stream(i);
    random_non_ac_pair(&cfg).unwrap()
}

/// `trials` compatible pairs followed by `trials` incompatible ones, tagged
/// with the expected verdict.
pub fn mixed_corpus(n: usize, seed: u64, trials: u64) -> Vec<(Contraction, Contraction, bool)> {
    let mut out = Vec::with_capacity(2 * trials as usize);
    for i in 0..trials {
        let (a, b) = ac_pair(n, seed, i);
        out.push((a, b, true));
    }
    for i in 0..trials {
        let (a, b) = non_ac_pair(n, seed ^ 0x9e37_79b9, i);
        out.push((a, b, false));
    }
    out
}
