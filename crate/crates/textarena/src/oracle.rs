//! Reference printf bindings for differential testing.
//!
//! Formats a single value through the C library's `snprintf`. This is the
//! independent oracle the formatter is checked against; nothing here touches
//! the crate's own parser or renderer. Only compiled with the
//! `printf-oracle` feature.

use std::ffi::CString;
use std::os::raw::{c_char, c_double, c_int, c_longlong, c_ulonglong};

fn format_with<F>(format: &str, call: F) -> String
where
    F: Fn(*mut c_char, usize, *const c_char) -> i32,
{
    let c_format = CString::new(format).expect("format must not contain NUL");
    let mut buf: Vec<u8> = vec![0; 256];
    loop {
        let written = call(
            buf.as_mut_ptr() as *mut c_char,
            buf.len(),
            c_format.as_ptr(),
        );
        assert!(written >= 0, "snprintf failed for {format:?}");
        let written = written as usize;
        if written < buf.len() {
            buf.truncate(written);
            return String::from_utf8(buf).expect("printf output is UTF-8");
        }
        buf.resize(written + 1, 0);
    }
}

/// `snprintf(buf, len, format, value)` with a signed 64-bit argument. The
/// format must use the `ll` length modifier, e.g. `%+08lld`.
pub fn sprintf_i64(format: &str, value: i64) -> String {
    format_with(format, |buf, len, fmt| unsafe {
        libc::snprintf(buf, len, fmt, value as c_longlong)
    })
}

/// `snprintf` with an unsigned 64-bit argument (`ll` modifier required).
pub fn sprintf_u64(format: &str, value: u64) -> String {
    format_with(format, |buf, len, fmt| unsafe {
        libc::snprintf(buf, len, fmt, value as c_ulonglong)
    })
}

/// `snprintf` with a double argument.
pub fn sprintf_f64(format: &str, value: f64) -> String {
    format_with(format, |buf, len, fmt| unsafe {
        libc::snprintf(buf, len, fmt, value as c_double)
    })
}

/// `snprintf` with a string argument (must not contain NUL).
pub fn sprintf_str(format: &str, value: &str) -> String {
    let c_value = CString::new(value).expect("argument must not contain NUL");
    format_with(format, |buf, len, fmt| unsafe {
        libc::snprintf(buf, len, fmt, c_value.as_ptr())
    })
}

/// `snprintf` with a character argument (passed as the promoted int).
pub fn sprintf_char(format: &str, value: char) -> String {
    format_with(format, |buf, len, fmt| unsafe {
        libc::snprintf(buf, len, fmt, value as c_int)
    })
}
