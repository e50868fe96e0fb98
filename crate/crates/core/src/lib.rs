pub mod error;
pub mod mesh;
pub mod polyspace;
pub mod tensor3;
pub mod element;
pub mod space;
pub mod analysis;
