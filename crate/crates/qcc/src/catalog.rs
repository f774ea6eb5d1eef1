//! Named small-rank families used throughout the test surface and the
//! command-line tools: their quivers, the reflection label sequences of
//! their distinguished indecomposable modules, and the mutation walks
//! that produce the matching cluster variables.
//!
//! For every entry the walk and the label sequence coincide: the variable
//! attached to a module is `variable_by_label(pair, last(seq), seq)` and
//! its count table is `recursion_counts(quiver, seq)`.

use crate::error::{Error, Result};
use crate::quiver::ValuedQuiver;

pub const FAMILIES: [&str; 5] = ["a2", "c2", "g2", "kronecker", "rank4"];

/// The quiver of a named family.
pub fn family_quiver(family: &str) -> Result<ValuedQuiver> {
    match family {
        "a2" => Ok(ValuedQuiver::rank2(1, 1)),
        "c2" => Ok(ValuedQuiver::rank2(2, 1)),
        "g2" => Ok(ValuedQuiver::rank2(3, 1)),
        "kronecker" => Ok(ValuedQuiver::rank2(2, 2)),
        "rank4" => ValuedQuiver::new(
            vec![
                vec![0, 2, 0, 0],
                vec![-2, 0, 2, 0],
                vec![0, -2, 0, 2],
                vec![0, 0, -2, 0],
            ],
            vec![1, 1, 1, 1],
        ),
        _ => Err(Error::Invalid(format!("unknown family '{family}'"))),
    }
}

/// The family a quiver belongs to, when it is one of the named ones.
pub fn family_of_quiver(q: &ValuedQuiver) -> Option<&'static str> {
    FAMILIES
        .into_iter()
        .find(|f| family_quiver(f).map(|fq| &fq == q).unwrap_or(false))
}

/// The module names of a family, smallest first. Kronecker modules are
/// unbounded series; `kronecker_max` caps the index.
pub fn rep_names(family: &str, kronecker_max: i64) -> Result<Vec<String>> {
    let fixed: &[&str] = match family {
        "a2" => &["s1", "i1", "s2"],
        "c2" => &["s1", "i2", "i1", "s2"],
        "g2" => &["s1", "i3", "i2", "i4", "i1", "s2"],
        "rank4" => &["m2", "m23", "m234"],
        "kronecker" => {
            let mut out = Vec::new();
            for n in 0..=kronecker_max {
                out.push(format!("p{n}"));
                out.push(format!("i{n}"));
            }
            return Ok(out);
        }
        _ => return Err(Error::Invalid(format!("unknown family '{family}'"))),
    };
    Ok(fixed.iter().map(|s| s.to_string()).collect())
}

/// The reflection label sequence of a named module (0-based vertex
/// indices). Rank-2 non-Kronecker modules are ordered by the alternating
/// walk from the source; Kronecker p<n> / i<n> are the (n, n+1) and
/// (n+1, n) series; rank-4 m2 / m23 / m234 are the modules reached by the
/// walks (2), (2,3), (2,3,4) in 1-based labels.
pub fn rep_label_sequence(family: &str, name: &str) -> Result<Vec<usize>> {
    let alternating = |start: usize, len: usize| -> Vec<usize> {
        (0..len).map(|t| (start + t) % 2).collect()
    };
    let fixed: &[(&str, &[usize])] = match family {
        "a2" => &[("s1", &[0]), ("i1", &[0, 1]), ("s2", &[0, 1, 0])],
        "c2" => &[
            ("s1", &[0]),
            ("i2", &[0, 1]),
            ("i1", &[0, 1, 0]),
            ("s2", &[0, 1, 0, 1]),
        ],
        "g2" => &[
            ("s1", &[0]),
            ("i3", &[0, 1]),
            ("i2", &[0, 1, 0]),
            ("i4", &[0, 1, 0, 1]),
            ("i1", &[0, 1, 0, 1, 0]),
            ("s2", &[0, 1, 0, 1, 0, 1]),
        ],
        "rank4" => &[("m2", &[1]), ("m23", &[1, 2]), ("m234", &[1, 2, 3])],
        "kronecker" => {
            let (series, idx) = name.split_at(1);
            let n: usize = idx
                .parse()
                .map_err(|_| Error::Invalid(format!("unknown module '{name}'")))?;
            return match series {
                "p" => Ok(alternating(1, n + 1)),
                "i" => Ok(alternating(0, n + 1)),
                _ => Err(Error::Invalid(format!("unknown module '{name}'"))),
            };
        }
        _ => return Err(Error::Invalid(format!("unknown family '{family}'"))),
    };
    fixed
        .iter()
        .find(|(k, _)| *k == name)
        .map(|(_, s)| s.to_vec())
        .ok_or_else(|| Error::Invalid(format!("family '{family}' has no module '{name}'")))
}

/// Mutation walk producing the m-th variable of a rank-2 exchange
/// sequence: (mutation sequence, slot to read). Labels 1 and 2 are the
/// initial variables; labels grow upward on walks from vertex 1 and
/// downward on walks from vertex 2.
pub fn rank2_variable_walk(m: i64) -> (Vec<usize>, usize) {
    if m == 1 || m == 2 {
        return (Vec::new(), (m - 1) as usize);
    }
    let (start, len) = if m >= 3 {
        (0usize, (m - 2) as usize)
    } else {
        (1usize, (1 - m) as usize)
    };
    let seq: Vec<usize> = (0..len).map(|t| (start + t) % 2).collect();
    let target = *seq.last().expect("walk is nonempty");
    (seq, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::recursion_counts;
    use crate::rep::build_example_rep;

    #[test]
    fn label_sequences_reach_the_module_classes() {
        for family in ["a2", "c2", "g2"] {
            let q = family_quiver(family).unwrap();
            for name in rep_names(family, 0).unwrap() {
                let seq = rep_label_sequence(family, &name).unwrap();
                let table = recursion_counts(&q, &seq).unwrap();
                let rep = build_example_rep(family, &name, 2).unwrap();
                assert_eq!(table.class, rep.class(), "{family}/{name}");
            }
        }
        let q = family_quiver("kronecker").unwrap();
        for n in 0..=3i64 {
            let p = recursion_counts(&q, &rep_label_sequence("kronecker", &format!("p{n}")).unwrap())
                .unwrap();
            assert_eq!(p.class, vec![n, n + 1]);
            let i = recursion_counts(&q, &rep_label_sequence("kronecker", &format!("i{n}")).unwrap())
                .unwrap();
            assert_eq!(i.class, vec![n + 1, n]);
        }
    }

    #[test]
    fn quiver_recognition_round_trips() {
        for family in FAMILIES {
            let q = family_quiver(family).unwrap();
            assert_eq!(family_of_quiver(&q), Some(family));
        }
        assert_eq!(family_of_quiver(&ValuedQuiver::rank2(4, 1)), None);
    }

    #[test]
    fn walks_are_alternating_and_labeled_consistently() {
        assert_eq!(rank2_variable_walk(1), (vec![], 0));
        assert_eq!(rank2_variable_walk(2), (vec![], 1));
        assert_eq!(rank2_variable_walk(3), (vec![0], 0));
        assert_eq!(rank2_variable_walk(5), (vec![0, 1, 0], 0));
        assert_eq!(rank2_variable_walk(0), (vec![1], 1));
        assert_eq!(rank2_variable_walk(-2), (vec![1, 0, 1], 1));
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(family_quiver("e8").is_err());
        assert!(rep_label_sequence("a2", "i9").is_err());
        assert!(rep_label_sequence("kronecker", "q3").is_err());
        assert!(rep_names("b2", 0).is_err());
    }
}
