use std::collections::HashMap;

use crate::naming::Name;

use super::FaceId;

/// Forwarding Information Base: prefix to an ordered list of next-hop faces.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Fib {
    routes: HashMap<Name, Vec<FaceId>>,
}

impl Fib {
    /// Appends `face` to the prefix's list unless already present.
    pub fn add_route(&mut self, prefix: Name, face: FaceId) {
        let faces = self.routes.entry(prefix).or_default();
        if !faces.contains(&face) {
            faces.push(face);
        }
    }

    pub fn remove_route(&mut self, prefix: &Name, face: FaceId) {
        if let Some(faces) = self.routes.get_mut(prefix) {
            faces.retain(|f| *f != face);
            if faces.is_empty() {
                self.routes.remove(prefix);
            }
        }
    }

    /// The longest matching prefix and its faces.
    pub fn lookup(&self, name: &Name) -> Option<(Name, &[FaceId])> {
        (0..=name.len()).rev().find_map(|len| {
            let p = name.prefix(len);
            let faces = self.routes.get(&p)?;
            Some((p, faces.as_slice()))
        })
    }

    pub fn len(&self) -> usize {
        self.routes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }

    pub fn routes(&self) -> impl Iterator<Item = (&Name, &[FaceId])> {
        self.routes.iter().map(|(n, f)| (n, f.as_slice()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Name {
        s.parse().unwrap()
    }

    #[test]
    fn longest_prefix_wins() {
        let mut fib = Fib::default();
        fib.add_route(n("/snnu"), 7);
        fib.add_route(n("/snnu/images"), 2);
        fib.add_route(Name::root(), 9);
        assert_eq!(fib.lookup(&n("/snnu/images/a.jpg")).unwrap().1, &[2]);
        assert_eq!(fib.lookup(&n("/snnu/video")).unwrap().1, &[7]);
        assert_eq!(fib.lookup(&n("/other")).unwrap().1, &[9]);
        fib.remove_route(&Name::root(), 9);
        assert!(fib.lookup(&n("/other")).is_none());
    }

    #[test]
    fn faces_keep_order_without_duplicates() {
        let mut fib = Fib::default();
        fib.add_route(n("/a"), 3);
        fib.add_route(n("/a"), 1);
        fib.add_route(n("/a"), 3);
        assert_eq!(fib.lookup(&n("/a/b")).unwrap().1, &[3, 1]);
    }
}
