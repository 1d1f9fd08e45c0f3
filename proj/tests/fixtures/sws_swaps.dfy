method Shuffle(a: int) returns (r: int)
{
  var x := a + 1;
  var y := x * 2;
  r := y - a;
}
