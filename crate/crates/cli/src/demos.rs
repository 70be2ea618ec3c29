//! Bundled demo scenarios. The same files live under `demos/` so they can
//! also be run with `run --config`.

pub struct Demo {
    pub name: &'static str,
    pub config: &'static str,
    pub universe: &'static str,
}

pub const DEMOS: [Demo; 4] = [
    Demo {
        name: "simple",
        config: include_str!("../demos/simple.toml"),
        universe: include_str!("../demos/simple.universe"),
    },
    Demo { name: "fm", config: include_str!("../demos/fm.toml"), universe: include_str!("../demos/fm.universe") },
    Demo {
        name: "split",
        config: include_str!("../demos/split.toml"),
        universe: include_str!("../demos/split.universe"),
    },
    Demo {
        name: "insep",
        config: include_str!("../demos/insep.toml"),
        universe: include_str!("../demos/insep.universe"),
    },
];

pub fn find(name: &str) -> Option<&'static Demo> {
    DEMOS.iter().find(|d| d.name == name)
}

pub fn names() -> Vec<&'static str> {
    DEMOS.iter().map(|d| d.name).collect()
}
