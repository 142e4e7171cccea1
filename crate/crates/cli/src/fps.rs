//! Frame-rate parsing: `25`, `30000/1001` or `29.97`.

use rallycut_core::Fps;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn parse_fps(text: &str) -> Result<Fps, String> {
    let text = text.trim();
    let bad = || format!("invalid frame rate `{text}`");
    let (num, den): (u64, u64) = if let Some((n, d)) = text.split_once('/') {
        (
            n.trim().parse().map_err(|_| bad())?,
            d.trim().parse().map_err(|_| bad())?,
        )
    } else if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || frac.len() > 6 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = 10u64.pow(frac.len() as u32);
        let whole: u64 = if whole.is_empty() {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let frac: u64 = frac.parse().map_err(|_| bad())?;
        (whole * scale + frac, scale)
    } else {
        (text.parse().map_err(|_| bad())?, 1)
    };
    if num == 0 || den == 0 {
        return Err(bad());
    }
    let g = gcd(num, den);
    let (num, den) = (num / g, den / g);
    let num = u32::try_from(num).map_err(|_| bad())?;
    let den = u32::try_from(den).map_err(|_| bad())?;
    Fps::new(num, den).map_err(|e| e.to_string())
}
