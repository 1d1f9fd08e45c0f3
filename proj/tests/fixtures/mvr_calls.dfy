method Observe(x: int) returns (r: int)
{
  r := x + 1;
}

method Main()
{
  var seed := 5;
  var other := 9;
  var got := Observe(seed);
  print got, "\n";
}
