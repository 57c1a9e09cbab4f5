/* Snake game: arrow keys or WASD steer, eating food scores points. */
var keys = [[37, 65], [38, 87], [39, 68], [40, 83]];
var direction = 0;
var score = 0;
var highScore = 0;
var scoreIncrement = 10;
var bonus = 0;
var ticks = 0;
var MAX_TICKS = 4;
var canvas = document.querySelector("#canvas");
var ctx = canvas.getContext("2d");

function changeDirection(e) {
    for (var dir = 0; dir < keys.length; dir++) {
        if (e.which == keys[dir][0] || e.which == keys[dir][1]) {
            e.preventDefault();
            direction = dir;
        }
    }
}

function updateScore() {
    score += scoreIncrement;
    $(".score").html(score);
    if (score > highScore) {
        highScore = score;
        $(".high-score").html(highScore);
    }
}

function eatFood(e) {
    updateScore();
}

function tick() {
    ctx.fillRect(0, 0, 10, 10);
    document.addEventListener("keydown", changeDirection, false);
    ticks++;
    if (ticks < MAX_TICKS)
        setTimeout(tick, 100);
}

document.addEventListener("food", eatFood, false);
tick();
