/* Legacy calculator widget that evaluates a fixed expression. */
var expression = "1 + 2";
var result = eval(expression);
var label = "Result: " + result;
