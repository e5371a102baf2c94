package com.example.core;

public class Logger {
    private String tag;

    public Logger(String tag) {
        this.tag = tag;
    }

    public void log(String message) {
        int init = 0;
        // writes one line to the console   
        System.out.println(tag + ": " + message);
    }
}
