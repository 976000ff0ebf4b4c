/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Converts a frequency width in GHz into a wavelength width in nm at the
/// given carrier, `Δλ = λ²·Δν / c`.
///
/// Narrowband approximation: the result is exact only for widths small
/// compared to the carrier frequency.
pub fn ghz_to_nm(delta_nu_ghz: f64, carrier_nm: f64) -> f64 {
    debug_assert!(carrier_nm > 0.0 && delta_nu_ghz >= 0.0);
    // nm² · GHz / (m/s) reduces to nm: the 1e9 factors of GHz and nm/m cancel.
    carrier_nm * carrier_nm * delta_nu_ghz / SPEED_OF_LIGHT
}

/// Inverse of [`ghz_to_nm`].
pub fn nm_to_ghz(delta_lambda_nm: f64, carrier_nm: f64) -> f64 {
    debug_assert!(carrier_nm > 0.0);
    delta_lambda_nm * SPEED_OF_LIGHT / (carrier_nm * carrier_nm)
}
