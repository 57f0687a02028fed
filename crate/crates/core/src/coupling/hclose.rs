use crate::error::{Error, Result};
use crate::sim::Environment;

/// Whether a list of differing pairs fits inside `{(x, z), (y, z)}` for some
/// distinct `x, y, z` among `n` vertices.
pub fn h_close_diff(diff: &[(usize, usize)], n: usize) -> bool {
    match diff {
        [] => true,
        [_] => n >= 3,
        [(a, b), (c, d)] => a == c || a == d || b == c || b == d,
        _ => false,
    }
}

/// The environments agree off two edges sharing an endpoint.
pub fn h_close(eta: &Environment, xi: &Environment) -> Result<bool> {
    if eta.n() != xi.n() {
        return Err(Error::SizeMismatch(eta.n(), xi.n()));
    }
    Ok(h_close_diff(&eta.difference(xi), eta.n()))
}
