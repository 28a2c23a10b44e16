//! Canonical instances used across tests, benches and docs.

use crate::bases::{load_instance, Instance};
use crate::scale::ScaleValue;

/// The umbrella instance: default certainty of rain-when-cloudy 3/5,
/// priority of not being overloaded 2/5.
pub fn umbrella() -> Instance {
    umbrella_with("3/5".parse().unwrap(), "2/5".parse().unwrap())
}

/// The umbrella instance with an arbitrary rain certainty `lambda` and
/// overload priority `sigma`, both in (0, 1).
pub fn umbrella_with(lambda: ScaleValue, sigma: ScaleValue) -> Instance {
    let text = format!(
        "decision_atoms: u\n\
         kb:\n\
         u -> l : 1\n\
         ~u -> ~l : 1\n\
         u -> ~w : 1\n\
         (r & ~u) -> w : 1\n\
         c : 1\n\
         ~r -> ~w : 1\n\
         c -> r : {lambda}\n\
         goals:\n\
         ~w : 1\n\
         ~l : {sigma}\n\
         decisions:\n\
         u\n\
         ~u\n"
    );
    load_instance(&text).expect("umbrella fixture must load")
}

/// A small instance with contradictory knowledge: `a` is fairly certain,
/// `~a` weakly so, and the decision `d` reaches the only goal via `a`.
pub fn conflict() -> Instance {
    let text = "decision_atoms: d\n\
                kb:\n\
                a : 4/5\n\
                ~a : 3/10\n\
                (d & a) -> g : 1\n\
                goals:\n\
                g : 1\n\
                decisions:\n\
                d\n\
                ~d\n";
    load_instance(text).expect("conflict fixture must load")
}
