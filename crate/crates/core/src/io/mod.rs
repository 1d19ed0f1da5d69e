//! Text and binary formats: hexadecimal floats, interval literals, vector
//! and matrix files. Every format round-trips bit for bit.

mod files;
mod hexfloat;

pub use files::{
    decode_vector_binary, encode_vector_binary, format_matrix, format_vector_text,
    parse_intervals_text, parse_matrix, parse_vector_text, read_interval_matrix, read_intervals,
    read_matrix, read_vector, write_matrix, write_vector,
};
pub use hexfloat::{format_hex, parse_hex};
