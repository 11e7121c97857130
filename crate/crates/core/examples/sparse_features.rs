//! Build window and dependency PPMI spaces and print the ten directional
//! features for a few pairs.

use lexent::sparse::{pair_features, BuildOptions, SpacePair, SparseSpace};

const TREEBANK: &str = "\
1\tthe\tthe\tDT\tDT\t_\t2\tdet\t_\t_
2\tdog\tdog\tNN\tNN\t_\t3\tnsubj\t_\t_
3\tchased\tchase\tVB\tVB\t_\t0\troot\t_\t_
4\tthe\tthe\tDT\tDT\t_\t5\tdet\t_\t_
5\tcat\tcat\tNN\tNN\t_\t3\tdobj\t_\t_

1\ta\ta\tDT\tDT\t_\t2\tdet\t_\t_
2\tanimal\tanimal\tNN\tNN\t_\t3\tnsubj\t_\t_
3\tslept\tsleep\tVB\tVB\t_\t0\troot\t_\t_

1\tthe\tthe\tDT\tDT\t_\t2\tdet\t_\t_
2\tanimal\tanimal\tNN\tNN\t_\t3\tnsubj\t_\t_
3\tchased\tchase\tVB\tVB\t_\t0\troot\t_\t_
4\ta\ta\tDT\tDT\t_\t5\tdet\t_\t_
5\tdog\tdog\tNN\tNN\t_\t3\tdobj\t_\t_
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lines: Vec<String> = [
        "the dog chased the cat",
        "the cat slept on the mat",
        "an animal slept on the mat",
        "the dog is an animal",
        "every animal eats and the dog eats meat",
        "the cat eats fish",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();

    let window = SparseSpace::build_window_from_lines(&lines, 2, BuildOptions::default())?;
    let dependency =
        SparseSpace::build_dependency_from_reader(TREEBANK.as_bytes(), BuildOptions::default())?;
    println!(
        "window space: {} words, {} contexts, {} nonzero",
        window.words().len(),
        window.contexts().len(),
        window.num_nonzero()
    );
    println!("dependency contexts of dog: {:?}", {
        let ids = dependency.context_set("dog").unwrap_or(&[]);
        ids.iter()
            .map(|&c| dependency.contexts()[c as usize].as_str())
            .collect::<Vec<_>>()
    });
    println!(
        "ppmi(dog, chased) in the window space = {:.3}",
        window.weight("dog", "chased")
    );

    let spaces = SpacePair { window, dependency };
    let names = ["cos", "wcos(1|2)", "wcos(2|1)", "shared/1", "shared/2"];
    for (a, b) in [("dog", "animal"), ("animal", "dog"), ("cat", "mat")] {
        let f = pair_features(&spaces, a, b);
        println!("\n{a} -> {b}");
        for (i, v) in f.as_slice().iter().enumerate() {
            let space = if i < 5 { "win" } else { "dep" };
            println!("  {space} {:<10} {v:.3}", names[i % 5]);
        }
    }
    Ok(())
}
