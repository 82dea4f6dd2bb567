use super::{ActionResult, Invalid};
use crate::datastore::schema::{entity as ecol, item as icol};
use crate::datastore::{EventRecord, GameState};
use crate::types::{EntityId, EventType};

/// List an owned, unequipped item at a fixed price. Returns the listing id.
pub fn market_sell(
    gs: &mut GameState,
    seller: EntityId,
    item: i64,
    price: i64,
) -> ActionResult<i64> {
    if !gs.is_alive(seller) || gs.ent(seller, ecol::HEALTH) <= 0 {
        return Err(Invalid::DeadActor);
    }
    if gs.item(item, icol::OWNER_ID) != Some(seller) {
        return Err(Invalid::NotOwner);
    }
    if gs.item(item, icol::EQUIPPED) == Some(1) {
        return Err(Invalid::Equipped);
    }
    if gs.item(item, icol::LISTED) == Some(1) {
        return Err(Invalid::Listed);
    }
    if price < 1 {
        return Err(Invalid::BadPrice);
    }
    let listing = gs.add_listing(seller, item, price);
    let ty = gs.item_type(item).unwrap();
    let level = gs.item(item, icol::LEVEL).unwrap();
    let tick = gs.current_tick();
    gs.log_event(
        EventRecord::new(tick, EventType::ListItem, seller)
            .item(ty, level)
            .price(price),
    )
    .expect("current tick");
    Ok(listing)
}

/// Buy a listing: gold moves buyer to seller, the item moves seller to buyer.
pub fn market_buy(gs: &mut GameState, buyer: EntityId, listing: i64) -> ActionResult {
    if !gs.is_alive(buyer) || gs.ent(buyer, ecol::HEALTH) <= 0 {
        return Err(Invalid::DeadActor);
    }
    let l = gs.listing(listing).ok_or(Invalid::NoListing)?;
    if l.seller == buyer {
        return Err(Invalid::OwnListing);
    }
    if gs.ent(buyer, ecol::GOLD) < l.price {
        return Err(Invalid::InsufficientGold);
    }
    if gs.inventory_full(buyer) {
        return Err(Invalid::InventoryFull);
    }
    let ty = gs.item_type(l.item).unwrap();
    let level = gs.item(l.item, icol::LEVEL).unwrap();
    gs.remove_listing(listing).expect("listing exists");
    gs.transfer_item(l.item, buyer);
    gs.set_ent(buyer, ecol::GOLD, gs.ent(buyer, ecol::GOLD) - l.price);
    gs.set_ent(l.seller, ecol::GOLD, gs.ent(l.seller, ecol::GOLD) + l.price);
    let tick = gs.current_tick();
    gs.log_event(
        EventRecord::new(tick, EventType::BuyItem, buyer)
            .item(ty, level)
            .price(l.price)
            .target(l.seller),
    )
    .expect("current tick");
    gs.log_event(
        EventRecord::new(tick, EventType::EarnGold, l.seller)
            .item(ty, level)
            .gold(l.price)
            .target(buyer),
    )
    .expect("current tick");
    Ok(())
}
