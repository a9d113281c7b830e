//! Parses a query, prints its canonical text and shows a positioned parse error.

use gpml::syntax::{parse, render};

fn main() {
    let q = parse("MATCH TRAIL p=(a WHERE a.owner='Jay')[-[b:Transfer]->]+(a)").unwrap();
    let text = render(&q);
    println!("{text}");
    assert_eq!(parse(&text).unwrap(), q);

    match parse("MATCH (a)-[e->(b)") {
        Ok(_) => unreachable!(),
        Err(e) => println!("error: {e}"),
    }
}
