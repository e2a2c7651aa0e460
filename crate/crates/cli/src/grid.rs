/// Values of log(1/delta) for a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

/// Accepts `start:stop:step` (inclusive), `a,b,c`, or a single number.
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let number = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("not a number: {t:?}"))
    };
    let values = if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(number).collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err("range must be start:stop:step".into());
        };
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
        if !(step > 0.0) || stop < start {
            return Err("range needs step > 0 and stop >= start".into());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| start + step * i as f64).collect()
    } else {
        s.split(',').map(number).collect::<Result<Vec<_>, _>>()?
    };
    if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err("log(1/delta) values must be positive".into());
    }
    Ok(Grid(values))
}
