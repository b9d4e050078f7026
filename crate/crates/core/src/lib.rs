pub mod complex;
pub mod filling;
pub mod folner;
pub mod group_ring;
pub mod groups;
pub mod hyperbolicity;
pub mod ring;
pub mod serde_ratio;
pub mod word;
