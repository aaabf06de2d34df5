//! A single forwarder driven by hand: cache hit, aggregation, FIB forwarding,
//! in-network retransmission and Data fan-out.

use lora_icn::forwarder::{Forwarder, RetxMode, TimerConfig};
use lora_icn::{Data, FaceId, Interest, Name, Nonce, SimDuration, SimTime};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let app = FaceId(0);
    let (down_a, down_b, up) = (FaceId(1), FaceId(2), FaceId(3));
    let mut f = Forwarder::new(app, TimerConfig::secs(4, 3, 1, RetxMode::Inr), 7);
    f.fib_add("/n1".parse()?, up, false, None, SimTime::ZERO)?;

    let name: Name = "/n1/42".parse()?;
    let interest = |nonce| Interest::new(name.clone(), Nonce(nonce), SimDuration::from_secs(4));
    let at = SimTime::from_secs_f64;

    println!("first Interest  -> {:?}", f.on_interest(down_a, interest(1), at(0.0)));
    println!("second Interest -> {:?}", f.on_interest(down_b, interest(2), at(0.2)));
    while let Some(t) = f.next_deadline().filter(|t| *t < at(3.5)) {
        for a in f.tick(t) {
            println!("tick {t}      -> {a:?}");
        }
    }
    println!("Data            -> {:?}", f.on_data(up, Data::value(name.clone(), 21), at(3.5)));
    println!("third Interest  -> {:?}", f.on_interest(down_a, interest(3), at(5.0)));
    println!("PIT {} entries, CS {} entries", f.pit().len(), f.cs().len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("static names parse");
}
