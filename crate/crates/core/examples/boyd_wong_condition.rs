use netsteer::perturbation::check_boyd_wong;

fn main() -> netsteer::Result<()> {
    for (m, rho) in [(0.5, 1.0), (1.0, 1.0), (2.0, 1.0), (0.0, 0.5), (0.25, 0.5), (2.0, 0.5)] {
        let c = check_boyd_wong(m, rho)?;
        let interval = match c.valid_interval {
            Some(iv) => match iv.high {
                Some(h) => format!("({}, {h})", iv.low),
                None => format!("({}, inf)", iv.low),
            },
            None => "empty".to_string(),
        };
        println!(
            "M = {m:<5} rho = {rho:<4} holds for every t > 0: {:<5}  M t^rho < t on {interval}",
            c.satisfied_globally
        );
    }
    Ok(())
}
