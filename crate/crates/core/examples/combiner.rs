//! Pack two formulas into one whose model count encodes both counts.

use selfred::{brute_force_count, combine, combine3, decode, decode3, parse};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (f, g) = (parse("x1")?, parse("x1 | x2")?);
    let r = combine(&f, &g)?;
    let h = brute_force_count(&r.combined)?;
    let d = decode(&r, &h);
    println!("H = {}", r.combined);
    println!("‖H‖ = {h} = {}·2^{} + {}", d.left, r.right_var_count + 1, d.right);

    // a node together with both of its children
    let node = parse("(x1 | x2) & (!x1 | x3)")?;
    let split = node.self_reduce()?;
    let r3 = combine3(&node, &split.if_true, &split.if_false)?;
    let count = brute_force_count(r3.combined())?;
    let t = decode3(&r3, &count).expect("honest count decodes");
    println!(
        "\n{node}: ‖H‖ = {count} over {} variables decodes to a = {}, b = {}, c = {}",
        r3.combined().vars().len(),
        t.a,
        t.b,
        t.c
    );
    println!("children: {} and {}", split.if_true, split.if_false);
    Ok(())
}
