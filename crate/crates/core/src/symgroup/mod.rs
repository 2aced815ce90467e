//! Symmetric groups, partitions, Young symmetrizers and the action on `P_n`.

mod group_algebra;
mod partition;
pub mod perm;

pub use group_algebra::{act, symmetrizer, GroupAlgebraElement};
pub use partition::{hook_dim, partitions, Partition, YoungTableau};
pub use perm::{factorial, Permutation};
