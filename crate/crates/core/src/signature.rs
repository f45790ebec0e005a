//! Monoidal signatures: the generating sorts and boxes of a free category.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::SignatureError;

/// A generating box with ordered input and output sort lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoxSignature {
    pub name: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl BoxSignature {
    pub fn new<S: Into<String>>(name: S, inputs: &[&str], outputs: &[&str]) -> Self {
        BoxSignature {
            name: name.into(),
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    pub fn coarity(&self) -> usize {
        self.outputs.len()
    }
}

/// A finite monoidal signature.
///
/// Sort and box names are unique and every sort a box mentions is declared.
/// Both lists keep their declaration order, which is the order used whenever
/// a sort or box needs a numeric index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    sorts: Vec<String>,
    boxes: Vec<BoxSignature>,
    sort_index: BTreeMap<String, usize>,
    box_index: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new(sorts: Vec<String>, boxes: Vec<BoxSignature>) -> Result<Self, SignatureError> {
        let mut sort_index = BTreeMap::new();
        for (i, s) in sorts.iter().enumerate() {
            if sort_index.insert(s.clone(), i).is_some() {
                return Err(SignatureError::DuplicateSort(s.clone()));
            }
        }
        let mut box_index = BTreeMap::new();
        for (i, b) in boxes.iter().enumerate() {
            if box_index.insert(b.name.clone(), i).is_some() {
                return Err(SignatureError::DuplicateBox(b.name.clone()));
            }
            for s in b.inputs.iter().chain(&b.outputs) {
                if !sort_index.contains_key(s) {
                    return Err(SignatureError::UnknownSort {
                        box_name: b.name.clone(),
                        sort: s.clone(),
                    });
                }
            }
        }
        Ok(Signature {
            sorts,
            boxes,
            sort_index,
            box_index,
        })
    }

    /// Convenience constructor from string slices.
    pub fn build(sorts: &[&str], boxes: Vec<BoxSignature>) -> Result<Self, SignatureError> {
        Signature::new(sorts.iter().map(|s| s.to_string()).collect(), boxes)
    }

    /// The signature with one sort and no boxes.
    pub fn single_sort(sort: &str) -> Self {
        Signature::build(&[sort], Vec::new()).expect("one sort is always valid")
    }

    pub fn empty() -> Self {
        Signature::build(&[], Vec::new()).expect("empty signature is valid")
    }

    pub fn sorts(&self) -> &[String] {
        &self.sorts
    }

    pub fn boxes(&self) -> &[BoxSignature] {
        &self.boxes
    }

    pub fn sort_index(&self, sort: &str) -> Option<usize> {
        self.sort_index.get(sort).copied()
    }

    pub fn box_index(&self, name: &str) -> Option<usize> {
        self.box_index.get(name).copied()
    }

    pub fn has_sort(&self, sort: &str) -> bool {
        self.sort_index.contains_key(sort)
    }

    pub fn box_signature(&self, name: &str) -> Option<&BoxSignature> {
        self.box_index(name).map(|i| &self.boxes[i])
    }

    /// Checks that every entry of `word` is a declared sort.
    pub fn check_word<S: AsRef<str>>(&self, word: &[S]) -> Result<(), SignatureError> {
        match word.iter().find(|s| !self.has_sort(s.as_ref())) {
            Some(s) => Err(SignatureError::UnknownSortInWord(s.as_ref().to_string())),
            None => Ok(()),
        }
    }
}

/// Turns a slice of `&str` into an owned sort word.
pub fn word(sorts: &[&str]) -> Vec<String> {
    sorts.iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_unknown_sorts() {
        assert_eq!(
            Signature::build(&["A", "A"], vec![]),
            Err(SignatureError::DuplicateSort("A".into()))
        );
        let f = BoxSignature::new("f", &["A"], &["A"]);
        assert_eq!(
            Signature::build(&["A"], vec![f.clone(), f]),
            Err(SignatureError::DuplicateBox("f".into()))
        );
        assert!(matches!(
            Signature::build(&["A"], vec![BoxSignature::new("g", &["B"], &[])]),
            Err(SignatureError::UnknownSort { .. })
        ));
    }

    #[test]
    fn lookups_follow_declaration_order() {
        let sig = Signature::build(
            &["A", "B"],
            vec![
                BoxSignature::new("f", &["A"], &["B"]),
                BoxSignature::new("s", &[], &["A"]),
            ],
        )
        .unwrap();
        assert_eq!(sig.sort_index("B"), Some(1));
        assert_eq!(sig.box_index("s"), Some(1));
        assert_eq!(sig.box_signature("f").unwrap().coarity(), 1);
        assert!(sig.check_word(&["A", "C"]).is_err());
    }
}
