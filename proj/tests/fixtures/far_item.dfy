class Item {
  var item: string
  var price: int
  var stock: int
}

method GetProfit(item: Item) returns (profit: int)
{
  profit := item.price * item.stock;
}
