//! Drive the command layer from an in-memory TOML configuration, as the
//! `mepacket` binary does with `--config`.

use mepacket::cli::{cmd_evolve, RunConfig};

const CONFIG: &str = r#"
[[packet]]
q = 0.4
p = -0.3
dq = 1.0
dp = 1.2

[potential]
mu = 1.0
coeffs = [0.0, 0.2, 1.0]

[evolve]
t_max = 6.283185307179586
n_out = 9
method = "matrix"
trunc_dim = 120
"#;

fn main() {
    let cfg = RunConfig::parse(CONFIG).expect("valid config");
    match cmd_evolve(&cfg, None) {
        Ok(out) => {
            print!("{}", out.report);
            print!("{}", out.csv.unwrap_or_default());
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
