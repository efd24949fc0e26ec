//! `so3ir topology ...`

use clap::Subcommand;
use serde_json::{json, Value};
use so3ir_core::topology::{
    pontrjagin_relation, semicharacteristics, spin_split_obstruction, split_conditions, sw_classes_s20,
    sw_total_s20, uniform_intersection_solutions, wu_check,
};

use crate::{CliError, Result};

#[derive(Debug, Subcommand)]
pub enum TopologyCommand {
    /// Stiefel-Whitney classes of the irreducible SO(3) bundle, Wu relations
    /// and the Pontrjagin factor
    Sw,
    /// Kervaire and Z2 semicharacteristics; defaults describe SU(3)/SO(3)
    Semichar {
        /// Real Betti numbers b0,b1,b2
        #[arg(long, default_value = "1,0,0")]
        betti: String,
        /// Z2 Betti numbers b0,b1,b2
        #[arg(long, default_value = "1,0,1")]
        z2_betti: String,
        /// Value of w2 w3 on the fundamental class
        #[arg(long, default_value_t = 1)]
        w2w3: u8,
    },
    /// Splitting conditions on a 4-manifold; `--p` adds the spin obstruction
    /// for p (S2 x S2) # (CP2 # -CP2) connected sums
    Split {
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long, allow_hyphen_values = true)]
        sigma: i64,
        /// Self-intersection c1(E)^2
        #[arg(long, allow_hyphen_values = true)]
        csq: i64,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Uniform solutions (s, t, a, b) of the intersection-form equation
    Diophantine {
        #[arg(long, default_value_t = 20)]
        t_max: u64,
        #[arg(long, default_value_t = 20)]
        a_max: u64,
        #[arg(long, default_value_t = 60)]
        b_max: u64,
    },
}

fn triple(flag: &str, s: &str) -> Result<[u64; 3]> {
    let v: Vec<u64> = s
        .split(',')
        .map(|x| x.trim().parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::Input(format!("--{flag} '{s}': {e}")))?;
    <[u64; 3]>::try_from(v).map_err(|_| CliError::Input(format!("--{flag}: expected three values")))
}

pub fn run(cmd: &TopologyCommand) -> Result<Value> {
    Ok(match cmd {
        TopologyCommand::Sw => {
            let classes: Vec<String> = sw_classes_s20().iter().map(|w| w.to_string()).collect();
            json!({
                "classes": classes,
                "total": sw_total_s20().to_string(),
                "wu": wu_check(),
                "pontrjagin": pontrjagin_relation(),
            })
        }
        TopologyCommand::Semichar { betti, z2_betti, w2w3 } => {
            let s = semicharacteristics(triple("betti", betti)?, triple("z2-betti", z2_betti)?, *w2w3);
            json!({"w2w3": w2w3, "result": s})
        }
        TopologyCommand::Split { chi, sigma, csq, p } => {
            let mut v = json!({
                "chi": chi,
                "sigma": sigma,
                "csq": csq,
                "conditions": split_conditions(*chi, *sigma, *csq),
            });
            if let Some(p) = p {
                let o = spin_split_obstruction(*p);
                v["spin"] = json!({
                    "p": o.p,
                    "q": o.q.to_string(),
                    "violates_11_8": o.violates_11_8,
                });
            }
            v
        }
        TopologyCommand::Diophantine { t_max, a_max, b_max } => {
            if *t_max > 1_000_000 || *a_max > 1_000_000 || *b_max > 1_000_000_000 {
                return Err(CliError::Input("diophantine bounds too large".into()));
            }
            let sols = uniform_intersection_solutions(*t_max, *a_max, *b_max);
            let verified = sols.iter().all(|s| s.satisfies());
            json!({
                "bounds": {"t_max": t_max, "a_max": a_max, "b_max": b_max},
                "count": sols.len(),
                "all_verified": verified,
                "solutions": sols,
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sw_output() {
        let v = run(&TopologyCommand::Sw).unwrap();
        assert_eq!(v["classes"][2], "w2");
        assert_eq!(v["pontrjagin"]["factor"], 5);
    }

    #[test]
    fn split_with_spin() {
        let v = run(&TopologyCommand::Split { chi: 24, sigma: 20, csq: 12, p: Some(0) }).unwrap();
        assert_eq!(v["conditions"]["equivalent"], true);
        assert_eq!(v["spin"]["q"], "5/4");
    }

    #[test]
    fn diophantine_defaults() {
        let v = run(&TopologyCommand::Diophantine { t_max: 20, a_max: 20, b_max: 60 }).unwrap();
        assert_eq!(v["all_verified"], true);
        assert_eq!(v["solutions"][0], json!({"s": 21, "t": 1, "a": 1, "b": 3}));
    }

    #[test]
    fn bad_betti() {
        let cmd = TopologyCommand::Semichar { betti: "1,0".into(), z2_betti: "1,0,1".into(), w2w3: 1 };
        assert!(run(&cmd).is_err());
    }
}
