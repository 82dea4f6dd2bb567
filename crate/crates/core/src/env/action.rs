//! Integer action encoding: `[kind, a, b, c]`.

use crate::sim::{Action, Invalid};
use crate::types::{CombatStyle, Direction};

pub const ACTION_WIDTH: usize = 4;

pub fn encode_action(a: &Action) -> [i64; ACTION_WIDTH] {
    match *a {
        Action::Noop => [0, 0, 0, 0],
        Action::Move(d) => {
            let code = d.map_or(0, |d| {
                Direction::ALL.iter().position(|&x| x == d).unwrap() as i64 + 1
            });
            [1, code, 0, 0]
        }
        Action::Attack { style, target } => [2, style.code(), target, 0],
        Action::Use(item) => [3, item, 0, 0],
        Action::Gather => [4, 0, 0, 0],
        Action::Sell { item, price } => [5, item, price, 0],
        Action::Buy(listing) => [6, listing, 0, 0],
    }
}

pub fn decode_action(v: &[i64]) -> Result<Action, Invalid> {
    let &[kind, a, b, _] = v else {
        return Err(Invalid::Malformed);
    };
    Ok(match kind {
        0 => Action::Noop,
        1 => match a {
            0 => Action::Move(None),
            1..=4 => Action::Move(Some(Direction::ALL[a as usize - 1])),
            _ => return Err(Invalid::Malformed),
        },
        2 => Action::Attack {
            style: CombatStyle::from_code(a).ok_or(Invalid::Malformed)?,
            target: b,
        },
        3 => Action::Use(a),
        4 => Action::Gather,
        5 => Action::Sell { item: a, price: b },
        6 => Action::Buy(a),
        _ => return Err(Invalid::Malformed),
    })
}
