//! Hierarchical content names.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("name must start with '/': {0:?}")]
    MissingLeadingSlash(String),
    #[error("name has no components")]
    Empty,
    #[error("name component is empty in {0:?}")]
    EmptyComponent(String),
    #[error("name component contains '/': {0:?}")]
    SlashInComponent(String),
}

/// A content name such as `/n1/42`.
///
/// Always holds at least one component; no component is empty or contains `/`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name {
    components: Vec<String>,
}

impl Name {
    pub fn from_components<I, S>(components: I) -> Result<Self, NameError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let components: Vec<String> = components.into_iter().map(Into::into).collect();
        if components.is_empty() {
            return Err(NameError::Empty);
        }
        for c in &components {
            if c.is_empty() {
                return Err(NameError::EmptyComponent(components.join("/")));
            }
            if c.contains('/') {
                return Err(NameError::SlashInComponent(c.clone()));
            }
        }
        Ok(Name { components })
    }

    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    /// Never true; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// True iff every component of `self` equals the corresponding leading component of `name`.
    pub fn is_prefix_of(&self, name: &Name) -> bool {
        self.components.len() <= name.components.len()
            && self.components.iter().zip(&name.components).all(|(a, b)| a == b)
    }

    /// Appends one component.
    pub fn child(&self, component: impl Into<String>) -> Result<Name, NameError> {
        let mut components = self.components.clone();
        components.push(component.into());
        Name::from_components(components)
    }

    /// Concatenates two names: `/a` ++ `/b/c` = `/a/b/c`.
    pub fn join(&self, suffix: &Name) -> Name {
        let mut components = self.components.clone();
        components.extend(suffix.components.iter().cloned());
        Name { components }
    }

    /// Removes `prefix` from the front, if it is one and something remains.
    pub fn strip_prefix(&self, prefix: &Name) -> Option<Name> {
        if prefix.is_prefix_of(self) && prefix.len() < self.len() {
            Some(Name { components: self.components[prefix.len()..].to_vec() })
        } else {
            None
        }
    }
}

/// Free-function form of [`Name::is_prefix_of`].
pub fn is_prefix_of(prefix: &Name, name: &Name) -> bool {
    prefix.is_prefix_of(name)
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.components {
            write!(f, "/{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Name {
    type Err = NameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rest = s
            .strip_prefix('/')
            .ok_or_else(|| NameError::MissingLeadingSlash(s.to_string()))?;
        if rest.is_empty() {
            return Err(NameError::Empty);
        }
        if rest.split('/').any(str::is_empty) {
            return Err(NameError::EmptyComponent(s.to_string()));
        }
        Name::from_components(rest.split('/'))
    }
}

impl Serialize for Name {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Name {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(s: &str) -> Name {
        s.parse().unwrap()
    }

    #[test]
    fn prefix_examples() {
        assert!(is_prefix_of(&n("/n1"), &n("/n1/42")));
        assert!(is_prefix_of(&n("/n1/42"), &n("/n1/42")));
        assert!(!is_prefix_of(&n("/n1/42"), &n("/n1")));
        assert!(!is_prefix_of(&n("/n1"), &n("/n10/1")));
    }

    #[test]
    fn rejects_malformed() {
        assert_eq!("n1".parse::<Name>(), Err(NameError::MissingLeadingSlash("n1".into())));
        assert_eq!("/".parse::<Name>(), Err(NameError::Empty));
        assert!(matches!("/a//b".parse::<Name>(), Err(NameError::EmptyComponent(_))));
        assert!(matches!("/a/".parse::<Name>(), Err(NameError::EmptyComponent(_))));
        assert!(matches!(Name::from_components(["a/b"]), Err(NameError::SlashInComponent(_))));
        assert_eq!(Name::from_components(Vec::<String>::new()), Err(NameError::Empty));
    }

    #[test]
    fn join_and_strip() {
        let full = n("/consumer/inbox").join(&n("/n1/3"));
        assert_eq!(full.to_string(), "/consumer/inbox/n1/3");
        assert_eq!(full.strip_prefix(&n("/consumer/inbox")), Some(n("/n1/3")));
        assert_eq!(full.strip_prefix(&full), None);
    }

    fn arb_name() -> impl Strategy<Value = Name> {
        prop::collection::vec("[a-c]{1,2}", 1..5).prop_map(|c| Name::from_components(c).unwrap())
    }

    proptest! {
        #[test]
        fn prefix_agrees_with_string_oracle(a in arb_name(), b in arb_name()) {
            let (ra, rb) = (a.to_string(), b.to_string());
            let oracle = rb.starts_with(&ra)
                && (rb.len() == ra.len() || rb.as_bytes()[ra.len()] == b'/');
            prop_assert_eq!(a.is_prefix_of(&b), oracle);
        }

        #[test]
        fn prefix_is_reflexive_and_transitive(a in arb_name(), b in arb_name(), c in arb_name()) {
            prop_assert!(a.is_prefix_of(&a));
            if a.is_prefix_of(&b) && b.is_prefix_of(&c) {
                prop_assert!(a.is_prefix_of(&c));
            }
        }

        #[test]
        fn render_parse_round_trip(a in arb_name()) {
            prop_assert_eq!(a.to_string().parse::<Name>().unwrap(), a);
        }
    }
}
