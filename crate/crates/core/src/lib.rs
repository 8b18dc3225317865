pub mod contour;
pub mod expr;
pub mod interp;
pub mod transforms;
pub mod verify;
pub mod cli;
