method Deletable(a: int, b: int) returns (x: int, y: int)
{
  var v := 5;
  x := a + v;
  y := v * b;
}

method NotDeletable(a: int) returns (x: int)
{
  var w := 7;
  x := w;
}
