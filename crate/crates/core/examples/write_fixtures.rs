//! Regenerates the fixture matrix files in the repository `data/`
//! directory. Run from the workspace root:
//!
//! ```text
//! cargo run -p mare-core --example write_fixtures
//! ```

use mare_core::{disc_epsilon, fixture, FixtureId, MatrixFile};
use std::path::Path;

fn main() {
    let dir = Path::new("data");
    for id in FixtureId::ALL {
        let f = fixture(id);
        let file = MatrixFile::from_problem(&f.problem);
        let text = format!("# {}: {}\n{}", id.name(), id.description(), file.render());
        std::fs::write(dir.join(format!("{}.mare", id.name())), text).unwrap();
    }
    for id in [FixtureId::Disc1, FixtureId::Disc2] {
        let (p, _) = disc_epsilon(id, 1e-3);
        let file = MatrixFile::from_problem(&p);
        let text = format!(
            "# {}_eps3: the {} family member at eps = 1e-3\n{}",
            id.name(),
            id.name(),
            file.render()
        );
        std::fs::write(dir.join(format!("{}_eps3.mare", id.name())), text).unwrap();
    }
    println!("wrote fixture files");
}
