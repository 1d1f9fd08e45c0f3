method Circle(radius: real) returns (p: real, a: real)
{
  var perimeter := 2.0 * radius * 3.14;
  var area := radius * radius * 3.14;
  p := perimeter;
  a := area;
}
