//! Switch between rayon and plain iterators.
//!
//! Callers only use indexed adaptors (`map`, `collect`) so the resulting
//! order is the input order under both backends.

#[cfg(feature = "parallel")]
macro_rules! maybe_par_iter {
    ($e:expr) => {
        rayon::iter::IntoParallelIterator::into_par_iter($e)
    };
}

#[cfg(not(feature = "parallel"))]
macro_rules! maybe_par_iter {
    ($e:expr) => {
        IntoIterator::into_iter($e)
    };
}
