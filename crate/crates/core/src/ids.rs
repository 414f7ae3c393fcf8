use std::borrow::Borrow;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(s: impl AsRef<str>) -> Self {
                $name(Arc::from(s.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", &*self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(Arc::from(s))
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.0)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                Ok($name::from(String::deserialize(d)?))
            }
        }
    };
}

string_id!(
    /// Vertex label. Labels are opaque; order of declaration is what the
    /// quiver remembers.
    VertexId
);

string_id!(
    /// Arrow label, unique within a quiver.
    ArrowId
);

impl ArrowId {
    /// Id of the reversed arrow: appends `*`, or strips one trailing `*`.
    pub fn reversed(&self) -> ArrowId {
        match self.0.strip_suffix('*') {
            Some(base) => ArrowId::new(base),
            None => ArrowId::new(format!("{}*", self.0)),
        }
    }

    /// Id of the composite of `first` followed by `second` (written
    /// right to left as `[second first]`).
    pub fn composite(second: &ArrowId, first: &ArrowId) -> ArrowId {
        ArrowId::new(format!("[{} {}]", second, first))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_reversal_collapses() {
        let a = ArrowId::new("alpha");
        assert_eq!(a.reversed().as_str(), "alpha*");
        assert_eq!(a.reversed().reversed(), a);
    }

    #[test]
    fn composite_naming() {
        let c = ArrowId::composite(&ArrowId::new("x"), &ArrowId::new("z"));
        assert_eq!(c.as_str(), "[x z]");
    }
}
