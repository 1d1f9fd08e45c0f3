method Ten() returns (r: int)
{
  var flag := true;
  var big := 10;
  var ratio := 2.5;
  var letter := 'x';
  r := big;
}
